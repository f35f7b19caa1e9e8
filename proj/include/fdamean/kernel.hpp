#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>

namespace fdamean {

//! Nonnegative kernel with compact support in the sup-norm unit ball,
//! Lipschitz continuous and bounded below by k_min on [-delta, delta]^d.
//!
//! Stateless and immutable; safe to evaluate concurrently.
struct Kernel {
  std::string name;
  int dim = 1;
  std::function<double(const Eigen::VectorXd&)> evaluate;
  double delta = 0.5;            // half-width of the guaranteed lower-bound box
  double k_min = 0.0;            // lower bound on [-delta, delta]^d
  double k_max = 1.0;            // global upper bound
  double lipschitz_const = 0.0;  // sup-norm Lipschitz constant

  double operator()(const Eigen::VectorXd& u) const { return evaluate(u); }
};

//! Product Epanechnikov kernel K(u) = prod_k max(1 - u_k^2, 0).
Kernel epanechnikov_kernel(int dim);

//! Product triangular kernel K(u) = prod_k max(1 - |u_k|, 0).
Kernel triangular_kernel(int dim);

//! Kernel by CLI name: "epanechnikov" (default) or "triangular".
Kernel kernel_by_name(const std::string& name, int dim);

struct KernelDiagnostics {
  double max_value = 0.0;            // max of K over sampled points
  double min_on_inner_box = 0.0;     // min of K over sampled [-delta, delta]^d
  double empirical_lipschitz = 0.0;  // sup |K(u)-K(v)| / ||u-v||_inf over pairs
  double max_support_violation = 0.0;  // max K outside the unit sup-ball
  bool pass_upper = false;
  bool pass_lower = false;
  bool pass_lipschitz = false;
  bool pass_support = false;

  bool pass() const { return pass_upper && pass_lower && pass_lipschitz && pass_support; }
};

//! Randomized check of the declared kernel constants. Pairs at several
//! separation scales probe the Lipschitz ratio, so jump discontinuities show
//! up as very large empirical constants.
KernelDiagnostics validate_kernel(const Kernel& kernel, int samples,
                                  std::uint64_t rng_seed);

}  // namespace fdamean
