#pragma once

#include <Eigen/Core>
#include <vector>

#include "fdamean/grid.hpp"
#include "fdamean/kernel.hpp"
#include "fdamean/multi_index.hpp"

namespace fdamean {

enum class EstimatorKind { LocalPolynomial, Interpolation };

//! Below this floor on the smallest eigenvalue of the local system the window
//! is reported as ill-conditioned instead of being regularized; a ridge would
//! silently break the polynomial-reproduction identities.
inline constexpr double kDefaultLambdaFloor = 1e-8;

//! Default admissible bandwidth range [3 / p_min, 0.25].
inline constexpr double kDefaultMaxBandwidth = 0.25;
inline double min_admissible_bandwidth(const Grid& grid) {
  return 3.0 / static_cast<double>(grid.min_axis_count());
}

struct WeightEntry {
  Eigen::Index index;  // flat design-point index
  double weight;
};

//! Sparse linear-estimator weights for one evaluation point: nonzero only
//! inside the sup-norm window of radius h, entries summing to 1.
struct WeightField {
  Eigen::VectorXd x;
  double h = 0.0;
  EstimatorKind kind = EstimatorKind::LocalPolynomial;
  int degree = 0;
  std::vector<WeightEntry> entries;

  double sum() const;
  //! Weighted sum over a vector indexed by flat design-point index.
  double apply(const Eigen::VectorXd& values) const;
  Eigen::VectorXd dense(Eigen::Index total_points) const;
};

//! Scaled second-moment matrix of the kernel-weighted monomials,
//!   B = (1 / (p^1 h^d)) sum_j U_h(x_j - x) U_h(x_j - x)^T K_h(x_j - x).
struct BMatrix {
  Eigen::VectorXd x;
  double h = 0.0;
  Eigen::MatrixXd matrix;
  double min_eigenvalue = 0.0;
};

BMatrix b_matrix(const Grid& grid, const Kernel& kernel,
                 const MultiIndexBasis& basis, const Eigen::VectorXd& x, double h);

//! Weights of the local polynomial estimator of degree basis.degree,
//!   w_j = (1 / (p^1 h^d)) e_1^T B^{-1} U_h(x_j - x) K_h(x_j - x),
//! computed by solving B v = e_1 (B is never inverted explicitly).
//! Throws IllConditionedWindowError when min_eigenvalue <= lambda_floor.
WeightField locpol_weight_field(const Grid& grid, const Kernel& kernel,
                                const MultiIndexBasis& basis,
                                const Eigen::VectorXd& x, double h,
                                double lambda_floor = kDefaultLambdaFloor);

//! Batched variant over the rows of eval_points; parallel over points.
std::vector<WeightField> locpol_weight_fields(const Grid& grid, const Kernel& kernel,
                                              const MultiIndexBasis& basis,
                                              const Eigen::MatrixXd& eval_points,
                                              double h,
                                              double lambda_floor = kDefaultLambdaFloor);

//! Coefficients of per-axis tensor-product linear interpolation among the
//! up-to-2^d surrounding design points; clamped to the nearest point at the
//! boundary. At a design point the field is a unit vector.
WeightField interpolation_weight_field(const Grid& grid, const Eigen::VectorXd& x);

std::vector<WeightField> interpolation_weight_fields(const Grid& grid,
                                                     const Eigen::MatrixXd& eval_points);

//! Dense n_eval x p^1 matrix with one field per row.
Eigen::MatrixXd weight_matrix(const std::vector<WeightField>& fields,
                              Eigen::Index total_points);

struct WeightDiagnostics {
  double sum_error = 0.0;            // |sum_j w_j - 1|
  double max_moment_residual = 0.0;  // max_{1<=|r|<=m} |sum_j (x_j-x)^r w_j|
  int locality_violations = 0;       // entries with ||x_j - x||_inf > h
  double sup_weight_scaled = 0.0;    // max_j |w_j| * p^1 h^d  (empirical C1)
  double abs_weight_sum = 0.0;       // sum_j |w_j|            (empirical C4)
};

WeightDiagnostics weight_diagnostics(const WeightField& field,
                                     const MultiIndexBasis& basis,
                                     const Grid& grid, double h);

//! Empirical Lipschitz constant of the weights for a pair of evaluation
//! points: max_j |w_j(x) - w_j(y)| * p^1 h^d / min(||x-y||_inf / h, 1).
double pair_lipschitz_constant(const WeightField& at_x, const WeightField& at_y,
                               const Grid& grid, double h);

//! Number of local least-squares systems solved since process start
//! (test hook: weights depend only on grid, h, kernel and degree, never on
//! responses, so callers can assert how often systems are rebuilt).
long weight_build_count();

}  // namespace fdamean
