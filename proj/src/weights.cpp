#include "fdamean/weights.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "fdamean/errors.hpp"
#include "fdamean/parallel.hpp"

namespace fdamean {

namespace {

std::atomic<long> g_weight_builds{0};

//! One design point inside the kernel window.
struct WindowPoint {
  Eigen::Index flat;
  double kernel_value;
  Eigen::VectorXd monomials;  // U_h(x_j - x)
};

//! Collects kernel-weighted window contents and the matrix B in one pass
//! over the Cartesian product of per-axis windows.
struct LocalSystem {
  Eigen::MatrixXd b;
  std::vector<WindowPoint> points;
};

LocalSystem collect_local_system(const Grid& grid, const Kernel& kernel,
                                 const MultiIndexBasis& basis,
                                 const Eigen::VectorXd& x, double h) {
  const int d = grid.dim();
  if (x.size() != d) throw std::invalid_argument("weights: point dimension mismatch");
  if (h <= 0.0) throw std::invalid_argument("weights: h must be positive");
  if (kernel.dim != d || basis.dim != d) {
    throw std::invalid_argument("weights: kernel/basis dimension mismatch");
  }

  std::vector<Eigen::Index> first(static_cast<std::size_t>(d));
  std::vector<Eigen::Index> last(static_cast<std::size_t>(d));
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(d));
  Eigen::Index window_size = 1;
  for (int k = 0; k < d; ++k) {
    const auto range = grid.axis_window(k, x[k] - h, x[k] + h);
    first[static_cast<std::size_t>(k)] = range.first;
    last[static_cast<std::size_t>(k)] = range.second;
    window_size *= range.second - range.first;
  }
  stride[static_cast<std::size_t>(d) - 1] = 1;
  for (int k = d - 2; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] =
        stride[static_cast<std::size_t>(k) + 1] * grid.axis_count(k + 1);
  }

  LocalSystem system;
  const Eigen::Index n_basis = basis.size();
  system.b = Eigen::MatrixXd::Zero(n_basis, n_basis);
  if (window_size <= 0) {
    throw DegenerateWindowError("no design point in the bandwidth window");
  }
  system.points.reserve(static_cast<std::size_t>(window_size));

  std::vector<Eigen::Index> idx = first;
  Eigen::VectorXd u(d);
  while (true) {
    Eigen::Index flat = 0;
    for (int k = 0; k < d; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      flat += idx[ks] * stride[ks];
      u[k] = grid.axis(k)[idx[ks]] - x[k];
    }
    const double kernel_value = kernel(u / h);
    if (kernel_value > 0.0) {
      WindowPoint point{flat, kernel_value, basis_vector(basis, u, h)};
      system.b.selfadjointView<Eigen::Lower>().rankUpdate(point.monomials,
                                                          kernel_value);
      system.points.push_back(std::move(point));
    }
    // Odometer increment, last axis fastest.
    int k = d - 1;
    for (; k >= 0; --k) {
      const auto ks = static_cast<std::size_t>(k);
      if (++idx[ks] < last[ks]) break;
      idx[ks] = first[ks];
    }
    if (k < 0) break;
  }

  if (system.points.empty()) {
    throw DegenerateWindowError("no design point carries kernel mass in the window");
  }

  const double scale = static_cast<double>(grid.total_points()) * std::pow(h, d);
  system.b = system.b.selfadjointView<Eigen::Lower>();
  system.b /= scale;
  return system;
}

}  // namespace

double WeightField::sum() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

double WeightField::apply(const Eigen::VectorXd& values) const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight * values[e.index];
  return total;
}

Eigen::VectorXd WeightField::dense(Eigen::Index total_points) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(total_points);
  for (const auto& e : entries) out[e.index] += e.weight;
  return out;
}

BMatrix b_matrix(const Grid& grid, const Kernel& kernel,
                 const MultiIndexBasis& basis, const Eigen::VectorXd& x, double h) {
  LocalSystem system = collect_local_system(grid, kernel, basis, x, h);
  BMatrix out;
  out.x = x;
  out.h = h;
  out.matrix = std::move(system.b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.matrix,
                                                        Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

WeightField locpol_weight_field(const Grid& grid, const Kernel& kernel,
                                const MultiIndexBasis& basis,
                                const Eigen::VectorXd& x, double h,
                                double lambda_floor) {
  LocalSystem system = collect_local_system(grid, kernel, basis, x, h);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(system.b);
  const double min_eigenvalue = eigen.eigenvalues().minCoeff();
  if (min_eigenvalue <= lambda_floor) {
    throw IllConditionedWindowError(
        "local system min eigenvalue " + std::to_string(min_eigenvalue) +
            " at or below floor " + std::to_string(lambda_floor) +
            "; enlarge the bandwidth",
        min_eigenvalue);
  }

  // Solve B v = e_1; Cholesky, with the already-computed eigendecomposition
  // as fallback.
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(basis.size());
  e1[0] = 1.0;
  Eigen::VectorXd v;
  Eigen::LLT<Eigen::MatrixXd> llt(system.b);
  if (llt.info() == Eigen::Success) {
    v = llt.solve(e1);
  } else {
    v = eigen.eigenvectors() *
        eigen.eigenvalues().cwiseInverse().asDiagonal() *
        (eigen.eigenvectors().transpose() * e1);
  }

  const double scale =
      1.0 / (static_cast<double>(grid.total_points()) * std::pow(h, grid.dim()));
  WeightField field;
  field.x = x;
  field.h = h;
  field.kind = EstimatorKind::LocalPolynomial;
  field.degree = basis.degree;
  field.entries.reserve(system.points.size());
  for (const auto& point : system.points) {
    const double w = scale * v.dot(point.monomials) * point.kernel_value;
    field.entries.push_back({point.flat, w});
  }
  ++g_weight_builds;
  return field;
}

std::vector<WeightField> locpol_weight_fields(const Grid& grid, const Kernel& kernel,
                                              const MultiIndexBasis& basis,
                                              const Eigen::MatrixXd& eval_points,
                                              double h, double lambda_floor) {
  std::vector<WeightField> fields(static_cast<std::size_t>(eval_points.rows()));
  parallel_for(fields.size(), [&](std::size_t i) {
    fields[i] = locpol_weight_field(
        grid, kernel, basis, eval_points.row(static_cast<Eigen::Index>(i)).transpose(),
        h, lambda_floor);
  });
  return fields;
}

WeightField interpolation_weight_field(const Grid& grid, const Eigen::VectorXd& x) {
  const int d = grid.dim();
  if (x.size() != d) throw std::invalid_argument("weights: point dimension mismatch");

  // Per-axis interpolation stencil: one point when x hits a coordinate or
  // lies outside the axis range (boundary clamp), two otherwise.
  struct AxisStencil {
    Eigen::Index index[2];
    double coeff[2];
    int count;
  };
  std::vector<AxisStencil> stencils(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const Eigen::VectorXd& axis = grid.axis(k);
    AxisStencil& s = stencils[static_cast<std::size_t>(k)];
    if (x[k] <= axis[0]) {
      s = {{0, 0}, {1.0, 0.0}, 1};
      continue;
    }
    if (x[k] >= axis[axis.size() - 1]) {
      s = {{axis.size() - 1, 0}, {1.0, 0.0}, 1};
      continue;
    }
    const double* begin = axis.data();
    const double* end = axis.data() + axis.size();
    const Eigen::Index hi = std::upper_bound(begin, end, x[k]) - begin;
    const Eigen::Index lo = hi - 1;
    if (axis[lo] == x[k]) {
      s = {{lo, 0}, {1.0, 0.0}, 1};
    } else {
      const double t = (x[k] - axis[lo]) / (axis[hi] - axis[lo]);
      s = {{lo, hi}, {1.0 - t, t}, 2};
    }
  }

  std::vector<Eigen::Index> stride(static_cast<std::size_t>(d));
  stride[static_cast<std::size_t>(d) - 1] = 1;
  for (int k = d - 2; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] =
        stride[static_cast<std::size_t>(k) + 1] * grid.axis_count(k + 1);
  }

  WeightField field;
  field.x = x;
  field.h = 0.0;
  field.kind = EstimatorKind::Interpolation;
  field.degree = 1;

  std::vector<int> pick(static_cast<std::size_t>(d), 0);
  while (true) {
    Eigen::Index flat = 0;
    double weight = 1.0;
    for (int k = 0; k < d; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      flat += stencils[ks].index[pick[ks]] * stride[ks];
      weight *= stencils[ks].coeff[pick[ks]];
    }
    field.entries.push_back({flat, weight});
    int k = d - 1;
    for (; k >= 0; --k) {
      const auto ks = static_cast<std::size_t>(k);
      if (++pick[ks] < stencils[ks].count) break;
      pick[ks] = 0;
    }
    if (k < 0) break;
  }
  return field;
}

std::vector<WeightField> interpolation_weight_fields(const Grid& grid,
                                                     const Eigen::MatrixXd& eval_points) {
  std::vector<WeightField> fields(static_cast<std::size_t>(eval_points.rows()));
  parallel_for(fields.size(), [&](std::size_t i) {
    fields[i] = interpolation_weight_field(
        grid, eval_points.row(static_cast<Eigen::Index>(i)).transpose());
  });
  return fields;
}

Eigen::MatrixXd weight_matrix(const std::vector<WeightField>& fields,
                              Eigen::Index total_points) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(fields.size()), total_points);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (const auto& e : fields[i].entries) {
      w(static_cast<Eigen::Index>(i), e.index) += e.weight;
    }
  }
  return w;
}

WeightDiagnostics weight_diagnostics(const WeightField& field,
                                     const MultiIndexBasis& basis,
                                     const Grid& grid, double h) {
  WeightDiagnostics diag;
  diag.sum_error = std::abs(field.sum() - 1.0);

  Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis.size());
  double sup_weight = 0.0;
  for (const auto& e : field.entries) {
    const Eigen::VectorXd u = grid.point(e.index) - field.x;
    if (u.lpNorm<Eigen::Infinity>() > h && e.weight != 0.0) {
      ++diag.locality_violations;
    }
    for (Eigen::Index i = 1; i < basis.size(); ++i) {
      double monomial = 1.0;
      for (int k = 0; k < basis.dim; ++k) {
        for (int rep = 0; rep < basis.exponents(i, k); ++rep) monomial *= u[k];
      }
      moments[i] += monomial * e.weight;
    }
    sup_weight = std::max(sup_weight, std::abs(e.weight));
    diag.abs_weight_sum += std::abs(e.weight);
  }
  diag.max_moment_residual =
      basis.size() > 1 ? moments.tail(basis.size() - 1).cwiseAbs().maxCoeff() : 0.0;
  const double scale =
      static_cast<double>(grid.total_points()) * std::pow(h, grid.dim());
  diag.sup_weight_scaled = sup_weight * scale;
  return diag;
}

double pair_lipschitz_constant(const WeightField& at_x, const WeightField& at_y,
                               const Grid& grid, double h) {
  const double gap = (at_x.x - at_y.x).lpNorm<Eigen::Infinity>();
  if (gap == 0.0) return 0.0;

  // Entries are emitted in ascending flat order; merge the two lists.
  double max_diff = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < at_x.entries.size() || j < at_y.entries.size()) {
    double diff;
    if (j >= at_y.entries.size() ||
        (i < at_x.entries.size() && at_x.entries[i].index < at_y.entries[j].index)) {
      diff = at_x.entries[i++].weight;
    } else if (i >= at_x.entries.size() ||
               at_y.entries[j].index < at_x.entries[i].index) {
      diff = at_y.entries[j++].weight;
    } else {
      diff = at_x.entries[i++].weight - at_y.entries[j++].weight;
    }
    max_diff = std::max(max_diff, std::abs(diff));
  }

  const double scale =
      static_cast<double>(grid.total_points()) * std::pow(h, grid.dim());
  return max_diff * scale / std::min(gap / h, 1.0);
}

long weight_build_count() { return g_weight_builds.load(); }

}  // namespace fdamean
