#include "fdamean/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "fdamean/rng.hpp"

namespace fdamean {

namespace {

// Values below this are flushed to exactly 0 to keep denormals out of the
// weight computations.
constexpr double kFlushThreshold = 1e-300;

Kernel product_kernel(std::string name, int dim,
                      std::function<double(double)> profile, double delta,
                      double k_min, double k_max, double lipschitz_const) {
  if (dim < 1) throw std::invalid_argument("kernel: dimension must be >= 1");
  Kernel k;
  k.name = std::move(name);
  k.dim = dim;
  k.delta = delta;
  k.k_min = k_min;
  k.k_max = k_max;
  k.lipschitz_const = lipschitz_const;
  k.evaluate = [dim, profile = std::move(profile)](const Eigen::VectorXd& u) {
    if (u.size() != dim) throw std::invalid_argument("kernel: point dimension mismatch");
    double value = 1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::abs(u[i]) > 1.0) return 0.0;
      value *= profile(u[i]);
      if (value == 0.0) return 0.0;
    }
    return value < kFlushThreshold ? 0.0 : value;
  };
  return k;
}

}  // namespace

Kernel epanechnikov_kernel(int dim) {
  return product_kernel(
      "epanechnikov", dim, [](double t) { return std::max(1.0 - t * t, 0.0); },
      0.5, std::pow(0.75, dim), 1.0, 2.0 * dim);
}

Kernel triangular_kernel(int dim) {
  return product_kernel(
      "triangular", dim, [](double t) { return std::max(1.0 - std::abs(t), 0.0); },
      0.5, std::pow(0.5, dim), 1.0, static_cast<double>(dim));
}

Kernel kernel_by_name(const std::string& name, int dim) {
  if (name == "epanechnikov") return epanechnikov_kernel(dim);
  if (name == "triangular") return triangular_kernel(dim);
  throw std::invalid_argument("unknown kernel: " + name);
}

KernelDiagnostics validate_kernel(const Kernel& kernel, int samples,
                                  std::uint64_t rng_seed) {
  if (samples < 2) throw std::invalid_argument("validate_kernel: samples must be >= 2");
  Rng rng(rng_seed);
  const int d = kernel.dim;
  KernelDiagnostics diag;

  Eigen::VectorXd u(d);
  Eigen::VectorXd v(d);

  for (int s = 0; s < samples; ++s) {
    // Interior sample for the upper bound.
    for (int k = 0; k < d; ++k) u[k] = rng.uniform(-1.0, 1.0);
    diag.max_value = std::max(diag.max_value, kernel(u));

    // Sample in the inner box for the lower bound.
    for (int k = 0; k < d; ++k) v[k] = rng.uniform(-kernel.delta, kernel.delta);
    const double inner = kernel(v);
    if (s == 0) diag.min_on_inner_box = inner;
    diag.min_on_inner_box = std::min(diag.min_on_inner_box, inner);

    // Outside the unit sup-ball the kernel must vanish.
    for (int k = 0; k < d; ++k) v[k] = rng.uniform(-3.0, 3.0);
    v[s % d] = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(1.0 + 1e-12, 3.0);
    diag.max_support_violation = std::max(diag.max_support_violation, kernel(v));

    // Lipschitz ratio over pairs at log-spaced separations; tiny separations
    // expose jumps. Offsets stay above ~1e-9 so rounding in K(u) - K(v)
    // cannot dominate the ratio.
    const double eps = std::pow(10.0, rng.uniform(-8.0, -0.3));
    for (int k = 0; k < d; ++k) {
      u[k] = rng.uniform(-1.1, 1.1);
      const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      v[k] = u[k] + sign * eps * rng.uniform(0.5, 1.0);
    }
    const double gap = (u - v).lpNorm<Eigen::Infinity>();
    if (gap > 0.0) {
      const double ratio = std::abs(kernel(u) - kernel(v)) / gap;
      diag.empirical_lipschitz = std::max(diag.empirical_lipschitz, ratio);
    }
  }

  diag.pass_upper = diag.max_value <= kernel.k_max + 1e-12;
  diag.pass_lower = diag.min_on_inner_box >= kernel.k_min - 1e-12;
  // Rounding in K(u) - K(v) at the smallest separations inflates the ratio
  // by up to ~1e-7; allow that much slack over the declared constant.
  diag.pass_lipschitz =
      diag.empirical_lipschitz <= kernel.lipschitz_const * (1.0 + 1e-6) + 1e-9;
  diag.pass_support = diag.max_support_violation == 0.0;
  return diag;
}

}  // namespace fdamean
