#include "fdamean/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fdamean/errors.hpp"

namespace fdamean {

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double left = 0.5 * (fa + fm) * (m - a);
  const double right = 0.5 * (fm + fb) * (b - m);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= 3.0 * tol) {
    // Richardson extrapolation of the trapezoid pair.
    return refined + (refined - whole) / 3.0;
  }
  return adaptive_step(f, a, m, fa, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_trapezoid(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double whole = 0.5 * (fa + fb) * (b - a);
  return adaptive_step(f, a, b, fa, fb, whole, tol, 48);
}

void AxisDensity::validate(int samples) const {
  if (!density) throw std::invalid_argument("AxisDensity: density not set");
  if (f_min <= 0.0) throw std::invalid_argument("AxisDensity: f_min must be positive");
  if (f_max < f_min) throw std::invalid_argument("AxisDensity: f_max below f_min");
  if (samples < 2) throw std::invalid_argument("AxisDensity: need at least 2 samples");

  const double mass = adaptive_trapezoid(density, 0.0, 1.0, 1e-10);
  if (std::abs(mass - 1.0) > 1e-8) {
    throw std::invalid_argument("AxisDensity: density integrates to " +
                                std::to_string(mass) + ", expected 1");
  }
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const double value = density(t);
    if (value < f_min - 1e-12 || value > f_max + 1e-12) {
      throw std::invalid_argument("AxisDensity: density(" + std::to_string(t) +
                                  ") = " + std::to_string(value) +
                                  " outside declared [f_min, f_max]");
    }
  }
}

Grid::Grid(std::vector<Eigen::VectorXd> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("Grid: needs at least one axis");
  total_ = 1;
  for (const auto& axis : axes_) {
    if (axis.size() < 1) throw std::invalid_argument("Grid: empty axis");
    for (Eigen::Index l = 0; l < axis.size(); ++l) {
      if (axis[l] < 0.0 || axis[l] > 1.0) {
        throw std::invalid_argument("Grid: coordinate outside [0,1]");
      }
      if (l > 0 && axis[l] <= axis[l - 1]) {
        throw std::invalid_argument("Grid: axis not strictly increasing");
      }
    }
    total_ *= axis.size();
  }
}

Eigen::Index Grid::min_axis_count() const {
  Eigen::Index m = axes_[0].size();
  for (const auto& axis : axes_) m = std::min(m, axis.size());
  return m;
}

Eigen::VectorXd Grid::point(Eigen::Index flat) const {
  const int d = dim();
  Eigen::VectorXd out(d);
  for (int k = d - 1; k >= 0; --k) {
    const Eigen::Index pk = axis_count(k);
    out[k] = axes_[static_cast<std::size_t>(k)][flat % pk];
    flat /= pk;
  }
  return out;
}

Eigen::Index Grid::flat_index(const std::vector<Eigen::Index>& multi) const {
  Eigen::Index flat = 0;
  for (int k = 0; k < dim(); ++k) {
    flat = flat * axis_count(k) + multi[static_cast<std::size_t>(k)];
  }
  return flat;
}

std::pair<Eigen::Index, Eigen::Index> Grid::axis_window(int k, double lo,
                                                        double hi) const {
  const Eigen::VectorXd& axis = axes_[static_cast<std::size_t>(k)];
  const double* begin = axis.data();
  const double* end = axis.data() + axis.size();
  // Closed interval on both sides.
  const Eigen::Index first = std::lower_bound(begin, end, lo) - begin;
  const Eigen::Index last = std::upper_bound(begin, end, hi) - begin;
  return {first, last};
}

Grid uniform_grid(const std::vector<Eigen::Index>& counts) {
  std::vector<Eigen::VectorXd> axes;
  axes.reserve(counts.size());
  for (const Eigen::Index p : counts) {
    if (p < 1) throw std::invalid_argument("uniform_grid: axis count must be >= 1");
    Eigen::VectorXd axis(p);
    for (Eigen::Index l = 0; l < p; ++l) {
      axis[l] = (static_cast<double>(l) + 0.5) / static_cast<double>(p);
    }
    axes.push_back(std::move(axis));
  }
  return Grid(std::move(axes));
}

Grid quantile_grid(const std::vector<AxisDensity>& densities,
                   const std::vector<Eigen::Index>& counts, double tol) {
  if (densities.size() != counts.size()) {
    throw std::invalid_argument("quantile_grid: one density per axis required");
  }
  if (tol <= 0.0) throw std::invalid_argument("quantile_grid: tol must be positive");

  std::vector<Eigen::VectorXd> axes;
  axes.reserve(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const AxisDensity& f = densities[k];
    f.validate();
    const Eigen::Index p = counts[k];
    if (p < 1) throw std::invalid_argument("quantile_grid: axis count must be >= 1");

    Eigen::VectorXd axis(p);
    double base_x = 0.0;    // left end of the current bracket
    double base_mass = 0.0; // cumulative integral up to base_x
    const double quad_tol = 0.1 * tol;
    for (Eigen::Index l = 0; l < p; ++l) {
      const double target = (static_cast<double>(l) + 0.5) / static_cast<double>(p);
      double lo = base_x;
      double hi = 1.0;
      double mass_lo = base_mass;
      // Bisection on the monotone cumulative integral.
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double mass_mid =
            mass_lo + adaptive_trapezoid(f.density, lo, mid, quad_tol);
        if (mass_mid < target) {
          lo = mid;
          mass_lo = mass_mid;
        } else {
          hi = mid;
        }
      }
      const double x = 0.5 * (lo + hi);
      const double mass = mass_lo + adaptive_trapezoid(f.density, lo, x, quad_tol);
      if (std::abs(mass - target) > tol) {
        throw NumericalError("quantile_grid: root search did not reach tolerance on axis " +
                             std::to_string(k));
      }
      axis[l] = x;
      base_x = x;
      base_mass = mass;
    }
    axes.push_back(std::move(axis));
  }
  return Grid(std::move(axes));
}

Eigen::Index count_in_box(const Grid& grid, const Eigen::VectorXd& center, double h) {
  if (center.size() != grid.dim()) {
    throw std::invalid_argument("count_in_box: center dimension mismatch");
  }
  if (h <= 0.0) throw std::invalid_argument("count_in_box: h must be positive");
  Eigen::Index count = 1;
  for (int k = 0; k < grid.dim(); ++k) {
    const auto [first, last] = grid.axis_window(k, center[k] - h, center[k] + h);
    count *= (last - first);
    if (count == 0) return 0;
  }
  return count;
}

}  // namespace fdamean
