#include "fdamean/multi_index.hpp"

#include <stdexcept>
#include <vector>

namespace fdamean {

namespace {

void enumerate_degree(int remaining, int coord, int dim, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (coord == dim - 1) {
    current[static_cast<std::size_t>(coord)] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(coord)] = e;
    enumerate_degree(remaining - e, coord + 1, dim, current, out);
  }
}

}  // namespace

MultiIndexBasis monomial_basis(int degree, int dim) {
  if (degree < 0) throw std::invalid_argument("monomial_basis: degree must be >= 0");
  if (dim < 1) throw std::invalid_argument("monomial_basis: dim must be >= 1");

  std::vector<std::vector<int>> rows;
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  for (int l = 0; l <= degree; ++l) {
    enumerate_degree(l, 0, dim, current, rows);
  }

  MultiIndexBasis basis;
  basis.degree = degree;
  basis.dim = dim;
  basis.exponents.resize(static_cast<Eigen::Index>(rows.size()), dim);
  basis.inv_factorial.resize(static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index i = 0; i < basis.exponents.rows(); ++i) {
    double factorial = 1.0;
    for (int k = 0; k < dim; ++k) {
      const int e = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      basis.exponents(i, k) = e;
      for (int j = 2; j <= e; ++j) factorial *= j;
    }
    basis.inv_factorial[i] = 1.0 / factorial;
  }
  return basis;
}

Eigen::VectorXd basis_vector(const MultiIndexBasis& basis,
                             const Eigen::VectorXd& u, double h) {
  if (h <= 0.0) throw std::invalid_argument("basis_vector: h must be positive");
  if (u.size() != basis.dim) {
    throw std::invalid_argument("basis_vector: point dimension mismatch");
  }
  // Per-coordinate power table (u_k/h)^e, e = 0..m.
  Eigen::MatrixXd powers(basis.dim, basis.degree + 1);
  for (int k = 0; k < basis.dim; ++k) {
    powers(k, 0) = 1.0;
    const double scaled = u[k] / h;
    for (int e = 1; e <= basis.degree; ++e) powers(k, e) = powers(k, e - 1) * scaled;
  }
  Eigen::VectorXd out(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    double value = basis.inv_factorial[i];
    for (int k = 0; k < basis.dim; ++k) value *= powers(k, basis.exponents(i, k));
    out[i] = value;
  }
  return out;
}

}  // namespace fdamean
