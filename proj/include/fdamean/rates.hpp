#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace fdamean {

//! Problem-size inputs for the closed-form rate and bandwidth formulas.
struct RateInputs {
  Eigen::Index n = 1;            // number of curves
  std::vector<Eigen::Index> p;   // per-axis design-point counts
  int d = 1;
  double alpha = 2.0;            // Hölder smoothness of the mean
  double c = 3.0;                // bandwidth floor constant in c / p_min

  Eigen::Index total_points() const;   // p^1
  Eigen::Index min_axis_count() const; // p_min
  void validate() const;
};

//! Three-term error bound
//!   a(n, p, h) = max( h^alpha, sqrt(log(1/h) / (n p^1 h^d)), n^{-1/2} ).
double rate_bound(const RateInputs& inputs, double h);

//! Rate-optimal bandwidth
//!   h* = max( c / p_min, (log(n p^1) / (n p^1))^{1 / (2 alpha + d)} ).
double optimal_bandwidth(const RateInputs& inputs);

enum class RateBranch { Discretization, Errors, Process };

std::string to_string(RateBranch branch);

struct OptimalRate {
  double value = 0.0;
  RateBranch branch = RateBranch::Process;  // which of the three terms binds
  double discretization_term = 0.0;         // p_min^{-alpha}
  double error_term = 0.0;                  // (log(n p^1) / (n p^1))^{alpha/(2 alpha + d)}
  double process_term = 0.0;                // n^{-1/2}
};

//! Optimal sup-norm rate max(p_min^{-alpha}, (log(n p^1)/(n p^1))^{alpha/(2alpha+d)}, n^{-1/2}).
OptimalRate optimal_rate(const RateInputs& inputs);

enum class Regime { Sparse, Intermediate, Dense };

std::string to_string(Regime regime);

//! Heuristic regime thresholds with all asymptotic constants taken as 1:
//! sparse when p_min <= (n / log n)^{1/(2 alpha)}, dense when
//! p_min >= (log n)^{1/d} n^{1/(2 alpha)}, intermediate in between.
struct RegimeClassification {
  Regime regime = Regime::Intermediate;
  double sparse_threshold = 0.0;
  double dense_threshold = 0.0;
};

RegimeClassification classify_regime(const RateInputs& inputs);

//! Envelope sigma sqrt(2 log(p^1) / n) for the interpolation estimator's
//! averaged-noise term max_j |eps_bar_j| (an envelope, not an exact mean).
double interpolation_error_envelope(Eigen::Index n, Eigen::Index total_points,
                                    double sigma);

//! Alternative bandwidth rule (log n)^{delta / d} / p_min; slight smoothing
//! that retains the n^{-1/2} rate for dense designs, with delta > 1 required
//! for inference.
double slight_smoothing_bandwidth(Eigen::Index n, Eigen::Index p_min, int d,
                                  double delta);

}  // namespace fdamean
