#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

namespace fdamean {

//! Composite trapezoid quadrature with interval bisection until the local
//! error estimate drops below tol.
double adaptive_trapezoid(const std::function<double(double)>& f, double a,
                          double b, double tol);

//! Design density on one axis, bounded away from 0 and infinity.
struct AxisDensity {
  std::function<double(double)> density;
  double f_min = 0.0;
  double f_max = 0.0;
  double lipschitz_const = 0.0;

  //! Checks that the density integrates to 1 over [0,1] (within 1e-8) and
  //! respects the declared bounds on a sample of points. Throws
  //! std::invalid_argument on violation.
  void validate(int samples = 2048) const;
};

//! Fixed Cartesian product design on [0,1]^d.
//!
//! Only per-axis coordinates are stored; the product is never materialized.
//! Flattened point indices are row-major with the last axis varying fastest.
//! Immutable after construction.
class Grid {
public:
  //! Axes must be nonempty, strictly increasing, with coordinates in [0,1].
  explicit Grid(std::vector<Eigen::VectorXd> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const Eigen::VectorXd& axis(int k) const { return axes_[static_cast<std::size_t>(k)]; }
  Eigen::Index axis_count(int k) const { return axes_[static_cast<std::size_t>(k)].size(); }

  //! Total number of design points, p^1 = prod_k p_k.
  Eigen::Index total_points() const { return total_; }

  //! Smallest per-axis count, p_min.
  Eigen::Index min_axis_count() const;

  //! Coordinates of the design point with the given flat index.
  Eigen::VectorXd point(Eigen::Index flat) const;

  Eigen::Index flat_index(const std::vector<Eigen::Index>& multi) const;

  //! Half-open index range [first, last) of axis-k coordinates inside the
  //! closed interval [lo, hi].
  std::pair<Eigen::Index, Eigen::Index> axis_window(int k, double lo, double hi) const;

private:
  std::vector<Eigen::VectorXd> axes_;
  Eigen::Index total_ = 0;
};

//! Grid with axis-k coordinates (l - 0.5) / p_k, l = 1..p_k.
Grid uniform_grid(const std::vector<Eigen::Index>& counts);

//! Quantile design: axis-k coordinates solve
//!   integral_0^{x_{k,l}} f_k = (l - 0.5) / p_k
//! by monotone bracketing root search on the cumulative integral.
Grid quantile_grid(const std::vector<AxisDensity>& densities,
                   const std::vector<Eigen::Index>& counts, double tol = 1e-10);

//! Exact number of design points in the closed sup-norm ball of radius h
//! around center (per-axis counting, then product).
Eigen::Index count_in_box(const Grid& grid, const Eigen::VectorXd& center, double h);

}  // namespace fdamean
