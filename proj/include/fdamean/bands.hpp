#pragma once

#include <Eigen/Core>

#include "fdamean/estimation.hpp"
#include "fdamean/grid.hpp"
#include "fdamean/rng.hpp"

namespace fdamean {

//! Residual matrix R_ij = Y_ij - fitted(x_j); NaN cells stay NaN.
Eigen::MatrixXd residual_curves(const CurveDataset& dataset,
                                const Eigen::VectorXd& fitted_at_design);

//! Covariance kernel of the curve-level process evaluated on a grid of
//! evaluation points (d = 1).
struct CovarianceEstimate {
  Eigen::MatrixXd eval_points;  // one point per row
  Eigen::MatrixXd gamma;        // symmetric PSD, one row/col per eval point
  Eigen::Index n_used = 0;
};

//! Empirical covariance of the residual curves carried to the evaluation
//! grid. The raw diagonal is inflated by the noise variance, so the design
//! diagonal is replaced by the average of its nearest off-diagonal neighbors
//! before bilinear interpolation; h_gamma > 0 additionally box-averages the
//! table at that radius. The result is projected to PSD by clipping negative
//! eigenvalues at zero.
CovarianceEstimate estimate_covariance(const Eigen::MatrixXd& residuals,
                                       const Grid& grid,
                                       const Eigen::MatrixXd& eval_points,
                                       double h_gamma = 0.0);

//! Empirical level-quantile (type-7 interpolation) of the sup of |G| over the
//! evaluation grid, where G is the centered Gaussian vector with the given
//! covariance. Paths are drawn via Cholesky with jitter 1e-10; draw m uses
//! rng.substream(m).
double gaussian_sup_quantile(const CovarianceEstimate& cov, double level,
                             Eigen::Index draws, const Rng& rng);

enum class BandMode { Unstudentized, Studentized };

//! Simultaneous confidence band around a mean estimate. Exactly one mode:
//! unstudentized halfwidth q / sqrt(n) with q the sup-quantile of |G|, or
//! studentized halfwidth q_s sqrt(gamma(x,x)) / sqrt(n) with q_s from the
//! pointwise-standardized process.
struct SimultaneousBand {
  EstimateCurve center;
  Eigen::VectorXd halfwidth;
  double level = 0.0;
  double quantile = 0.0;
  BandMode mode = BandMode::Unstudentized;

  Eigen::VectorXd lower() const { return center.values - halfwidth; }
  Eigen::VectorXd upper() const { return center.values + halfwidth; }
};

SimultaneousBand simultaneous_band(const EstimateCurve& estimate,
                                   const CovarianceEstimate& cov, Eigen::Index n,
                                   double level, Eigen::Index draws, const Rng& rng,
                                   BandMode mode = BandMode::Unstudentized);

//! Advisory check that h lies in the undersmoothing set of the CLT:
//! h^alpha below n^{-1/2}, log(1/h)/h^d below p^1, and h inside
//! (c / p_min, h0]. Constants are unspecified in the asymptotics; raw values
//! are reported so callers can judge borderline cases.
struct HSetCheck {
  double h = 0.0;
  double bias_term = 0.0;     // h^alpha
  double bias_bound = 0.0;    // n^{-1/2}
  double entropy_term = 0.0;  // log(1/h) / h^d
  double entropy_bound = 0.0; // p^1
  bool bias_ok = false;
  bool entropy_ok = false;
  bool in_range = false;
  bool all_ok() const { return bias_ok && entropy_ok && in_range; }
};

HSetCheck h_set_check(double h, double alpha, Eigen::Index n, Eigen::Index total_points,
                      Eigen::Index p_min, int d, double c = 3.0, double h0 = 0.25);

}  // namespace fdamean
