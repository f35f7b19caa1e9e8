#pragma once

#include <Eigen/Core>
#include <string>

#include "fdamean/estimation.hpp"
#include "fdamean/simulation.hpp"

namespace fdamean {

struct BandwidthGrid {
  Eigen::VectorXd values;  // strictly increasing, all in (0, 1)
  std::string rule;
};

//! Candidate bandwidths starting at 3 / p_min with the given step, up to
//! h_max (a single candidate when the floor already exceeds h_max).
BandwidthGrid default_bandwidth_grid(Eigen::Index p_min, double step = 0.005,
                                     double h_max = kDefaultMaxBandwidth);

struct GridSearchResult {
  double best_h = 0.0;
  Eigen::Index best_index = 0;
  Eigen::VectorXd h_values;
  Eigen::VectorXd mean_errors;  // NaN where the candidate failed
};

//! Monte-Carlo sup-norm-optimal bandwidth on a known-truth model: the
//! candidate minimizing the mean sup-norm error over the replications, ties
//! broken toward the smaller h. Throws NoValidBandwidthError when every
//! candidate fails.
GridSearchResult grid_search_supnorm(const SimulationModel& model, Eigen::Index n,
                                     const Grid& grid, const EstimatorConfig& config,
                                     const BandwidthGrid& h_grid,
                                     Eigen::Index replications,
                                     const Eigen::MatrixXd& eval_points,
                                     const Rng& rng);

struct CvResult {
  double best_h = 0.0;
  Eigen::Index best_index = 0;
  Eigen::VectorXd h_values;
  Eigen::VectorXd scores;  // NaN where the candidate failed
};

//! Leave-one-curve-out cross validation at the design points:
//!   CV(h) = sum_i sum_j (Y_ij - muhat^{(-i)}_h(x_j))^2.
//! The estimator is linear in Ybar, so muhat^{(-i)} is computed from the
//! leave-one-out mean (n Ybar - Y_i) / (n - 1) without rebuilding weights;
//! one weight computation per candidate h. Residuals at missing cells are
//! excluded and column means use the available rows.
CvResult loocv(const CurveDataset& dataset, const EstimatorConfig& config,
               const BandwidthGrid& h_grid);

}  // namespace fdamean
