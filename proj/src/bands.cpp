#include "fdamean/bands.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fdamean/errors.hpp"
#include "fdamean/parallel.hpp"
#include "fdamean/weights.hpp"

namespace fdamean {

Eigen::MatrixXd residual_curves(const CurveDataset& dataset,
                                const Eigen::VectorXd& fitted_at_design) {
  if (fitted_at_design.size() != dataset.grid().total_points()) {
    throw std::invalid_argument(
        "residual_curves: fitted values must cover the design grid");
  }
  return dataset.y().rowwise() - fitted_at_design.transpose();
}

CovarianceEstimate estimate_covariance(const Eigen::MatrixXd& residuals,
                                       const Grid& grid,
                                       const Eigen::MatrixXd& eval_points,
                                       double h_gamma) {
  const Eigen::Index n = residuals.rows();
  const Eigen::Index p = grid.total_points();
  if (n < 2) throw std::invalid_argument("estimate_covariance: need n >= 2 curves");
  if (residuals.cols() != p) {
    throw std::invalid_argument("estimate_covariance: residual columns must match grid");
  }
  if (grid.dim() != 1) {
    throw std::invalid_argument(
        "estimate_covariance: covariance interpolation is implemented for d = 1");
  }
  if (p < 2) throw std::invalid_argument("estimate_covariance: need p >= 2 design points");
  if (eval_points.cols() != 1) {
    throw std::invalid_argument("estimate_covariance: evaluation points must be 1-d");
  }

  // Available-case raw covariance on the design grid.
  Eigen::MatrixXd filled = residuals;
  Eigen::MatrixXd observed = Eigen::MatrixXd::Ones(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (std::isnan(filled(i, j))) {
        filled(i, j) = 0.0;
        observed(i, j) = 0.0;
      }
    }
  }
  const Eigen::MatrixXd sums = filled.transpose() * filled;
  const Eigen::MatrixXd counts = observed.transpose() * observed;
  Eigen::MatrixXd table(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = 0; k < p; ++k) {
      table(j, k) = counts(j, k) >= 2.0 ? sums(j, k) / (counts(j, k) - 1.0) : 0.0;
    }
  }

  // The raw diagonal carries the noise variance; fill it from the nearest
  // off-diagonal values instead.
  Eigen::VectorXd diagonal(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double sum = 0.0;
    int used = 0;
    if (j > 0) {
      sum += table(j, j - 1);
      ++used;
    }
    if (j + 1 < p) {
      sum += table(j, j + 1);
      ++used;
    }
    diagonal[j] = sum / used;
  }
  table.diagonal() = diagonal;

  if (h_gamma > 0.0) {
    // Separable box average at radius h_gamma over the design table.
    const Eigen::VectorXd& axis = grid.axis(0);
    Eigen::MatrixXd rows_smoothed(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto [first, last] = grid.axis_window(0, axis[j] - h_gamma, axis[j] + h_gamma);
      rows_smoothed.row(j) =
          table.middleRows(first, last - first).colwise().mean();
    }
    Eigen::MatrixXd smoothed(p, p);
    for (Eigen::Index k = 0; k < p; ++k) {
      const auto [first, last] = grid.axis_window(0, axis[k] - h_gamma, axis[k] + h_gamma);
      smoothed.col(k) =
          rows_smoothed.middleCols(first, last - first).rowwise().mean();
    }
    table = 0.5 * (smoothed + smoothed.transpose());
  }

  // Bilinear carry to the evaluation grid via the interpolation stencils.
  const std::vector<WeightField> stencils =
      interpolation_weight_fields(grid, eval_points);
  const Eigen::MatrixXd carry = weight_matrix(stencils, p);
  Eigen::MatrixXd gamma = carry * table * carry.transpose();
  gamma = 0.5 * (gamma + gamma.transpose());

  // PSD projection by clipping negative eigenvalues at zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gamma);
  const Eigen::VectorXd clipped = eigen.eigenvalues().cwiseMax(0.0);
  gamma = eigen.eigenvectors() * clipped.asDiagonal() * eigen.eigenvectors().transpose();
  gamma = 0.5 * (gamma + gamma.transpose());

  CovarianceEstimate out;
  out.eval_points = eval_points;
  out.gamma = std::move(gamma);
  out.n_used = n;
  return out;
}

double gaussian_sup_quantile(const CovarianceEstimate& cov, double level,
                             Eigen::Index draws, const Rng& rng) {
  if (level <= 0.0 || level >= 1.0) {
    throw std::invalid_argument("gaussian_sup_quantile: level must lie in (0, 1)");
  }
  if (draws < 100) {
    throw std::invalid_argument("gaussian_sup_quantile: need at least 100 draws");
  }
  const Eigen::Index m = cov.gamma.rows();
  Eigen::MatrixXd jittered = cov.gamma;
  jittered.diagonal().array() += 1e-10;
  Eigen::LLT<Eigen::MatrixXd> llt(jittered);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("gaussian_sup_quantile: covariance not factorizable after jitter");
  }
  const Eigen::MatrixXd factor = llt.matrixL();

  std::vector<double> sups(static_cast<std::size_t>(draws));
  parallel_for(sups.size(), [&](std::size_t i) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(i));
    sups[i] = (factor * stream.normals(m)).cwiseAbs().maxCoeff();
  });
  std::sort(sups.begin(), sups.end());

  // Type-7 empirical quantile.
  const double position = static_cast<double>(draws - 1) * level;
  const auto lo = static_cast<std::size_t>(position);
  const std::size_t hi = std::min(lo + 1, sups.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return sups[lo] + frac * (sups[hi] - sups[lo]);
}

SimultaneousBand simultaneous_band(const EstimateCurve& estimate,
                                   const CovarianceEstimate& cov, Eigen::Index n,
                                   double level, Eigen::Index draws, const Rng& rng,
                                   BandMode mode) {
  if (estimate.values.size() != cov.gamma.rows()) {
    throw std::invalid_argument(
        "simultaneous_band: estimate and covariance grids differ");
  }
  if (n < 1) throw std::invalid_argument("simultaneous_band: n must be >= 1");
  if (level < 0.0 || level >= 1.0) {
    throw std::invalid_argument("simultaneous_band: level must lie in [0, 1)");
  }

  SimultaneousBand band;
  band.center = estimate;
  band.level = level;
  band.mode = mode;
  const Eigen::Index m = estimate.values.size();

  if (level == 0.0) {
    band.quantile = 0.0;
    band.halfwidth = Eigen::VectorXd::Zero(m);
    return band;
  }

  const double root_n = std::sqrt(static_cast<double>(n));
  if (mode == BandMode::Unstudentized) {
    band.quantile = gaussian_sup_quantile(cov, level, draws, rng);
    band.halfwidth = Eigen::VectorXd::Constant(m, band.quantile / root_n);
    return band;
  }

  // Studentized: standardize the process pointwise, then rescale.
  const Eigen::VectorXd scale = cov.gamma.diagonal().cwiseMax(0.0).cwiseSqrt();
  CovarianceEstimate standardized;
  standardized.eval_points = cov.eval_points;
  standardized.n_used = cov.n_used;
  standardized.gamma = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (scale[i] > 0.0 && scale[j] > 0.0) {
        standardized.gamma(i, j) = cov.gamma(i, j) / (scale[i] * scale[j]);
      }
    }
  }
  band.quantile = gaussian_sup_quantile(standardized, level, draws, rng);
  band.halfwidth = (band.quantile / root_n) * scale;
  return band;
}

HSetCheck h_set_check(double h, double alpha, Eigen::Index n, Eigen::Index total_points,
                      Eigen::Index p_min, int d, double c, double h0) {
  if (h <= 0.0 || h >= 1.0) throw std::invalid_argument("h_set_check: h must lie in (0, 1)");
  HSetCheck check;
  check.h = h;
  check.bias_term = std::pow(h, alpha);
  check.bias_bound = 1.0 / std::sqrt(static_cast<double>(n));
  check.entropy_term = std::log(1.0 / h) / std::pow(h, d);
  check.entropy_bound = static_cast<double>(total_points);
  check.bias_ok = check.bias_term <= check.bias_bound;
  check.entropy_ok = check.entropy_term <= check.entropy_bound;
  check.in_range = h > c / static_cast<double>(p_min) && h <= h0;
  return check;
}

}  // namespace fdamean
