#include "fdamean/bandwidth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fdamean/errors.hpp"

namespace fdamean {

BandwidthGrid default_bandwidth_grid(Eigen::Index p_min, double step, double h_max) {
  if (p_min < 1) throw std::invalid_argument("default_bandwidth_grid: p_min must be >= 1");
  if (step <= 0.0) throw std::invalid_argument("default_bandwidth_grid: step must be positive");
  const double start = 3.0 / static_cast<double>(p_min);
  std::vector<double> values;
  for (double h = start; h <= h_max + 1e-12; h += step) values.push_back(h);
  if (values.empty()) values.push_back(start);
  BandwidthGrid grid;
  grid.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
  grid.rule = "start at 3/p_min, step " + std::to_string(step) + ", end " +
              std::to_string(h_max);
  return grid;
}

namespace {

//! Index of the smallest finite value, ties toward the smaller index.
Eigen::Index argmin_ignoring_nan(const Eigen::VectorXd& values) {
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (best < 0 || values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace

GridSearchResult grid_search_supnorm(const SimulationModel& model, Eigen::Index n,
                                     const Grid& grid, const EstimatorConfig& config,
                                     const BandwidthGrid& h_grid,
                                     Eigen::Index replications,
                                     const Eigen::MatrixXd& eval_points,
                                     const Rng& rng) {
  GridSearchResult result;
  result.h_values = h_grid.values;
  result.mean_errors = bandwidth_error_curve(model, n, grid, config, h_grid.values,
                                             replications, eval_points, rng);
  const Eigen::Index best = argmin_ignoring_nan(result.mean_errors);
  if (best < 0) {
    throw NoValidBandwidthError("grid_search_supnorm: every candidate bandwidth failed");
  }
  result.best_index = best;
  result.best_h = result.h_values[best];
  return result;
}

CvResult loocv(const CurveDataset& dataset, const EstimatorConfig& config,
               const BandwidthGrid& h_grid) {
  const Eigen::Index n = dataset.curve_count();
  if (n < 2) throw std::invalid_argument("loocv: need at least two curves");

  const Grid& grid = dataset.grid();
  const Eigen::Index p1 = grid.total_points();
  Eigen::MatrixXd design_points(p1, grid.dim());
  for (Eigen::Index j = 0; j < p1; ++j) design_points.row(j) = grid.point(j).transpose();

  const Eigen::MatrixXd& y = dataset.y();
  const Eigen::VectorXd& ybar = dataset.mean_curve();
  const Eigen::VectorXi& counts = dataset.column_counts();

  CvResult result;
  result.h_values = h_grid.values;
  result.scores.resize(h_grid.values.size());

  for (Eigen::Index hi = 0; hi < h_grid.values.size(); ++hi) {
    EstimatorConfig candidate = config;
    candidate.h = h_grid.values[hi];
    Eigen::MatrixXd w;
    try {
      // One weight computation per candidate; weights never see responses.
      const std::vector<WeightField> fields =
          estimator_weight_fields(grid, candidate, design_points);
      w = weight_matrix(fields, p1);
    } catch (const std::exception&) {
      result.scores[hi] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }

    double score = 0.0;
    Eigen::VectorXd ybar_minus(p1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p1; ++j) {
        const double value = y(i, j);
        if (!std::isnan(value) && counts[j] >= 2) {
          ybar_minus[j] =
              (counts[j] * ybar[j] - value) / static_cast<double>(counts[j] - 1);
        } else {
          // Missing in curve i (or curve i is the only observer): the
          // leave-one-out mean falls back to the available-case mean.
          ybar_minus[j] = ybar[j];
        }
      }
      const Eigen::VectorXd fitted = w * ybar_minus;
      for (Eigen::Index j = 0; j < p1; ++j) {
        const double value = y(i, j);
        if (!std::isnan(value)) {
          const double residual = value - fitted[j];
          score += residual * residual;
        }
      }
    }
    result.scores[hi] = score;
  }

  const Eigen::Index best = argmin_ignoring_nan(result.scores);
  if (best < 0) {
    throw NoValidBandwidthError("loocv: every candidate bandwidth failed");
  }
  result.best_index = best;
  result.best_h = result.h_values[best];
  return result;
}

}  // namespace fdamean
