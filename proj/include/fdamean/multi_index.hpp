#pragma once

#include <Eigen/Core>

namespace fdamean {

//! Ordered monomial basis of total degree <= m in d variables.
//!
//! Multi-indices are enumerated grouped by total degree (degree 0 first, so
//! row 0 is the zero index and the monomial vector starts with the constant
//! 1); within a degree the order is lexicographic with earlier coordinates
//! more significant. Size is binom(d + m, d).
struct MultiIndexBasis {
  int degree = 0;  // m
  int dim = 1;     // d
  Eigen::MatrixXi exponents;      // size() x dim, row per multi-index
  Eigen::VectorXd inv_factorial;  // 1 / r! per multi-index

  Eigen::Index size() const { return exponents.rows(); }
};

MultiIndexBasis monomial_basis(int degree, int dim);

//! Scaled monomial vector with entries (u/h)^r / r! in basis order.
Eigen::VectorXd basis_vector(const MultiIndexBasis& basis,
                             const Eigen::VectorXd& u, double h);

}  // namespace fdamean
