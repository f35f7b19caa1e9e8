#include "fdamean/simulation.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fdamean/errors.hpp"
#include "fdamean/parallel.hpp"

namespace fdamean {

double mean_mu0(double x) {
  const double t = 2.0 * x - 1.0;
  return std::sin(3.0 * std::numbers::pi * t) * std::exp(-2.0 * std::abs(t));
}

Eigen::VectorXd sample_brownian(const Eigen::VectorXd& coords, Rng& rng) {
  const Eigen::Index p = coords.size();
  Eigen::VectorXd path(p);
  double prev_t = 0.0;
  double prev_b = 0.0;
  for (Eigen::Index l = 0; l < p; ++l) {
    const double t = coords[l];
    if (t < prev_t || (l > 0 && t == coords[l - 1]) || t > 1.0 || t < 0.0) {
      throw std::invalid_argument(
          "sample_brownian: coordinates must be sorted strictly increasing in [0,1]");
    }
    const double dt = t - prev_t;
    prev_b = dt > 0.0 ? prev_b + std::sqrt(dt) * rng.normal() : prev_b;
    path[l] = prev_b;
    prev_t = t;
  }
  return path;
}

ProcessSampler::ProcessSampler(const SimulationModel& model, const Grid& grid)
    : kind_(model.process), total_points_(grid.total_points()) {
  switch (kind_) {
    case ProcessKind::None:
      break;
    case ProcessKind::BrownianMotion:
      if (grid.dim() != 1) {
        throw std::invalid_argument(
            "ProcessSampler: Brownian motion paths are defined for d = 1 only; "
            "use a covariance-specified Gaussian field instead");
      }
      axis_ = grid.axis(0);
      break;
    case ProcessKind::GaussianCovariance: {
      if (!model.covariance) {
        throw std::invalid_argument("ProcessSampler: covariance function not set");
      }
      Eigen::MatrixXd gamma(total_points_, total_points_);
      for (Eigen::Index i = 0; i < total_points_; ++i) {
        const Eigen::VectorXd xi = grid.point(i);
        for (Eigen::Index j = 0; j <= i; ++j) {
          const double value = model.covariance(xi, grid.point(j));
          gamma(i, j) = value;
          gamma(j, i) = value;
        }
      }
      gamma.diagonal().array() += 1e-10;
      Eigen::LLT<Eigen::MatrixXd> llt(gamma);
      if (llt.info() != Eigen::Success) {
        throw NumericalError("ProcessSampler: covariance is not factorizable");
      }
      factor_ = llt.matrixL();
      break;
    }
  }
}

Eigen::VectorXd ProcessSampler::sample_path(Rng& rng) const {
  switch (kind_) {
    case ProcessKind::None:
      return Eigen::VectorXd::Zero(total_points_);
    case ProcessKind::BrownianMotion:
      return sample_brownian(axis_, rng);
    case ProcessKind::GaussianCovariance:
      return factor_ * rng.normals(total_points_);
  }
  return Eigen::VectorXd::Zero(total_points_);
}

namespace {

Eigen::VectorXd draw_averaged_noise(const SimulationModel& model, Eigen::Index n,
                                    Eigen::Index total_points, Rng& rng) {
  if (!model.custom_noise) {
    // Averages of i.i.d. Gaussians: eps_bar_j ~ N(0, sigma^2 / n) directly.
    return (model.sigma / std::sqrt(static_cast<double>(n))) *
           rng.normals(total_points);
  }
  // Custom law: no closed form for the average, so average n draws.
  Eigen::VectorXd eps_bar = Eigen::VectorXd::Zero(total_points);
  for (Eigen::Index j = 0; j < total_points; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) eps_bar[j] += model.custom_noise(rng);
    eps_bar[j] *= model.sigma / static_cast<double>(n);
  }
  return eps_bar;
}

}  // namespace

AveragedSample sample_averaged(const SimulationModel& model, Eigen::Index n,
                               const Grid& grid, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_averaged: n must be >= 1");
  const ProcessSampler sampler(model, grid);
  AveragedSample sample;
  sample.eps_bar = draw_averaged_noise(model, n, grid.total_points(), rng);
  sample.z_bar = sampler.sample_path(rng) / std::sqrt(static_cast<double>(n));
  return sample;
}

namespace {

SummaryStat summarize(const std::vector<ReplicationRecord>& records,
                      double ReplicationRecord::* member) {
  SummaryStat stat;
  Eigen::Index count = 0;
  for (const auto& r : records) {
    if (r.ok) {
      stat.mean += r.*member;
      ++count;
    }
  }
  if (count == 0) return stat;
  stat.mean /= static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (const auto& r : records) {
      if (r.ok) {
        const double gap = r.*member - stat.mean;
        ss += gap * gap;
      }
    }
    stat.sd = std::sqrt(ss / static_cast<double>(count - 1));
  }
  return stat;
}

std::vector<Eigen::Index> grid_counts(const Grid& grid) {
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(grid.dim()));
  for (int k = 0; k < grid.dim(); ++k) counts[static_cast<std::size_t>(k)] = grid.axis_count(k);
  return counts;
}

}  // namespace

ReplicationReport run_replications(const SimulationModel& model, Eigen::Index n,
                                   const Grid& grid, const EstimatorConfig& config,
                                   const Eigen::MatrixXd& eval_points,
                                   Eigen::Index replications, const Rng& rng) {
  if (replications < 1) {
    throw std::invalid_argument("run_replications: need at least one replication");
  }
  if (!model.mean) throw std::invalid_argument("run_replications: mean function not set");
  const auto start = std::chrono::steady_clock::now();

  ReplicationReport report;
  report.n = n;
  report.p = grid_counts(grid);
  report.config = config;
  report.replications = replications;
  report.seed = rng.seed();
  report.records.resize(static_cast<std::size_t>(replications));

  // Weights and the bias curve do not depend on the responses; build once.
  std::string setup_error;
  Eigen::MatrixXd w;
  Eigen::VectorXd bias_curve;
  try {
    const std::vector<WeightField> fields =
        estimator_weight_fields(grid, config, eval_points);
    w = weight_matrix(fields, grid.total_points());
    Eigen::VectorXd mean_design(grid.total_points());
    for (Eigen::Index j = 0; j < grid.total_points(); ++j) {
      mean_design[j] = model.mean(grid.point(j));
    }
    bias_curve = w * mean_design;
    for (Eigen::Index i = 0; i < eval_points.rows(); ++i) {
      bias_curve[i] -= model.mean(eval_points.row(i).transpose());
    }
  } catch (const std::exception& e) {
    setup_error = e.what();
  }

  if (!setup_error.empty()) {
    for (auto& record : report.records) {
      record.ok = false;
      record.error = setup_error;
    }
    report.failures = replications;
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

  const ProcessSampler sampler(model, grid);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double sup_bias = bias_curve.cwiseAbs().maxCoeff();

  parallel_for(static_cast<std::size_t>(replications), [&](std::size_t r) {
    ReplicationRecord& record = report.records[r];
    try {
      Rng stream = rng.substream(static_cast<std::uint64_t>(r));
      const Eigen::VectorXd eps_bar =
          draw_averaged_noise(model, n, grid.total_points(), stream);
      const Eigen::VectorXd z_bar = sampler.sample_path(stream) / root_n;
      const Eigen::VectorXd noise_curve = w * eps_bar;
      const Eigen::VectorXd process_curve = w * z_bar;
      record.total =
          (bias_curve + noise_curve + process_curve).cwiseAbs().maxCoeff();
      record.bias = sup_bias;
      record.noise = noise_curve.cwiseAbs().maxCoeff();
      record.process = process_curve.cwiseAbs().maxCoeff();
      record.ok = true;
    } catch (const std::exception& e) {
      record.ok = false;
      record.error = e.what();
    }
  });

  for (const auto& record : report.records) {
    if (!record.ok) ++report.failures;
  }
  report.total = summarize(report.records, &ReplicationRecord::total);
  report.bias = summarize(report.records, &ReplicationRecord::bias);
  report.noise = summarize(report.records, &ReplicationRecord::noise);
  report.process = summarize(report.records, &ReplicationRecord::process);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Eigen::VectorXd bandwidth_error_curve(const SimulationModel& model, Eigen::Index n,
                                      const Grid& grid, const EstimatorConfig& config,
                                      const Eigen::VectorXd& h_values,
                                      Eigen::Index replications,
                                      const Eigen::MatrixXd& eval_points,
                                      const Rng& rng) {
  Eigen::VectorXd means(h_values.size());
  for (Eigen::Index i = 0; i < h_values.size(); ++i) {
    EstimatorConfig candidate = config;
    candidate.h = h_values[i];
    // Substreams are keyed by replication index only, so every candidate
    // bandwidth sees the same draws.
    const ReplicationReport report =
        run_replications(model, n, grid, candidate, eval_points, replications, rng);
    means[i] = report.failures == 0 ? report.total.mean
                                    : std::numeric_limits<double>::quiet_NaN();
  }
  return means;
}

std::vector<RateExperimentRow> rate_experiment(
    const SimulationModel& model,
    const std::vector<std::pair<Eigen::Index, std::vector<Eigen::Index>>>& configs,
    const std::function<Eigen::VectorXd(Eigen::Index p_min)>& h_rule,
    const EstimatorConfig& config, Eigen::Index eval_points_per_axis,
    Eigen::Index replications, const Rng& rng) {
  if (configs.empty()) throw std::invalid_argument("rate_experiment: no configurations");
  std::vector<RateExperimentRow> rows;
  rows.reserve(configs.size());
  for (const auto& [n, p] : configs) {
    const Grid grid = uniform_grid(p);
    const Eigen::MatrixXd eval_points =
        uniform_eval_points(grid.dim(), eval_points_per_axis);
    RateExperimentRow row;
    row.n = n;
    row.p = p;
    row.h_values = h_rule(grid.min_axis_count());
    row.mean_errors = bandwidth_error_curve(model, n, grid, config, row.h_values,
                                            replications, eval_points, rng);
    row.best_h = std::numeric_limits<double>::quiet_NaN();
    row.best_error = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index i = 0; i < row.h_values.size(); ++i) {
      if (std::isnan(row.mean_errors[i])) continue;
      if (std::isnan(row.best_error) || row.mean_errors[i] < row.best_error) {
        row.best_error = row.mean_errors[i];
        row.best_h = row.h_values[i];
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fdamean
