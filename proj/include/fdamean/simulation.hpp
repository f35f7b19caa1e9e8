#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fdamean/estimation.hpp"
#include "fdamean/grid.hpp"
#include "fdamean/rng.hpp"

namespace fdamean {

enum class ProcessKind { None, BrownianMotion, GaussianCovariance };

//! Data-generating model: mean function with declared smoothness, a centered
//! curve-level process, and per-point Gaussian noise.
struct SimulationModel {
  std::function<double(const Eigen::VectorXd&)> mean;
  double alpha = 2.0;          // Hölder smoothness of the mean
  double holder_const = 1.0;   // Hölder norm bound of the mean
  ProcessKind process = ProcessKind::BrownianMotion;
  double beta = 0.5;           // path-Hölder exponent of the process
  double process_moment = 1.0; // second-moment bound of the process
  //! Covariance kernel, used only with ProcessKind::GaussianCovariance.
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> covariance;
  double sigma = 1.0;          // noise standard deviation per observation
  //! Optional custom noise law: draws one standardized (mean-zero, unit
  //! variance) error. When set, averaged noise is formed by explicitly
  //! averaging n draws per design point; the Gaussian closed-form shortcut
  //! only applies to the default law.
  std::function<double(Rng&)> custom_noise;
};

//! Test-bed mean function sin(3 pi (2x - 1)) exp(-2 |2x - 1|), d = 1.
double mean_mu0(double x);

//! Brownian path at the given sorted coordinates in [0,1]; increments are
//! exact Gaussians, so there is no discretization error at grid points.
Eigen::VectorXd sample_brownian(const Eigen::VectorXd& coords, Rng& rng);

//! Draws paths of the model's curve-level process at the design points.
//! Factorizations (for covariance-specified processes) happen once at
//! construction; sampling is cheap and usable from substreams.
class ProcessSampler {
public:
  ProcessSampler(const SimulationModel& model, const Grid& grid);
  Eigen::VectorXd sample_path(Rng& rng) const;

private:
  ProcessKind kind_;
  Eigen::VectorXd axis_;          // d = 1 coordinates for Brownian motion
  Eigen::MatrixXd factor_;        // Cholesky factor of the covariance
  Eigen::Index total_points_ = 0;
};

//! Averaged noise and process for synchronous designs, sampled directly:
//! eps_bar_j ~ N(0, sigma^2 / n) i.i.d. and zbar = n^{-1/2} x one process
//! path (the law of an average of n i.i.d. Gaussian draws). The noise vector
//! is drawn first, then the path.
struct AveragedSample {
  Eigen::VectorXd eps_bar;
  Eigen::VectorXd z_bar;
};

AveragedSample sample_averaged(const SimulationModel& model, Eigen::Index n,
                               const Grid& grid, Rng& rng);

struct ReplicationRecord {
  double total = 0.0;    // sup |I1 + I2 + I3|
  double bias = 0.0;     // sup |I1|
  double noise = 0.0;    // sup |I2|
  double process = 0.0;  // sup |I3|
  bool ok = false;
  std::string error;
};

struct SummaryStat {
  double mean = 0.0;
  double sd = 0.0;
};

struct ReplicationReport {
  Eigen::Index n = 0;
  std::vector<Eigen::Index> p;
  EstimatorConfig config;
  Eigen::Index replications = 0;
  std::uint64_t seed = 0;
  std::vector<ReplicationRecord> records;
  SummaryStat total, bias, noise, process;  // over successful records
  Eigen::Index failures = 0;
  double runtime_seconds = 0.0;
};

//! Replicated experiment: per replication draw (eps_bar, zbar), form
//! Ybar_j = mu(x_j) + zbar_j + eps_bar_j, estimate on the evaluation grid and
//! record the sup-norm error together with its decomposition. Weights are
//! built once (they do not depend on the responses); replication r draws from
//! rng.substream(r), so results are independent of execution order.
ReplicationReport run_replications(const SimulationModel& model, Eigen::Index n,
                                   const Grid& grid, const EstimatorConfig& config,
                                   const Eigen::MatrixXd& eval_points,
                                   Eigen::Index replications, const Rng& rng);

//! Monte-Carlo mean sup-norm error for each candidate bandwidth, sharing the
//! per-replication draws across candidates. Candidates whose windows fail
//! yield NaN.
Eigen::VectorXd bandwidth_error_curve(const SimulationModel& model, Eigen::Index n,
                                      const Grid& grid, const EstimatorConfig& config,
                                      const Eigen::VectorXd& h_values,
                                      Eigen::Index replications,
                                      const Eigen::MatrixXd& eval_points,
                                      const Rng& rng);

struct RateExperimentRow {
  Eigen::Index n = 0;
  std::vector<Eigen::Index> p;
  Eigen::VectorXd h_values;
  Eigen::VectorXd mean_errors;  // NaN where the candidate failed
  double best_h = 0.0;
  double best_error = 0.0;
};

//! Sweep over (n, p) configurations on uniform designs: per configuration the
//! error curve across the bandwidth rule's grid plus the minimizing h (ties
//! toward the smaller h).
std::vector<RateExperimentRow> rate_experiment(
    const SimulationModel& model,
    const std::vector<std::pair<Eigen::Index, std::vector<Eigen::Index>>>& configs,
    const std::function<Eigen::VectorXd(Eigen::Index p_min)>& h_rule,
    const EstimatorConfig& config, Eigen::Index eval_points_per_axis,
    Eigen::Index replications, const Rng& rng);

}  // namespace fdamean
