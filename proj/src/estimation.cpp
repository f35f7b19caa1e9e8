#include "fdamean/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "fdamean/errors.hpp"
#include "fdamean/kernel.hpp"
#include "fdamean/multi_index.hpp"

namespace fdamean {

CurveDataset::CurveDataset(Grid grid, Eigen::MatrixXd y)
    : grid_(std::move(grid)), y_(std::move(y)) {
  if (y_.rows() < 1) throw std::invalid_argument("CurveDataset: needs n >= 1 curves");
  if (y_.cols() != grid_.total_points()) {
    throw std::invalid_argument("CurveDataset: column count does not match grid");
  }
  mean_curve_.resize(y_.cols());
  column_counts_.resize(y_.cols());
  for (Eigen::Index j = 0; j < y_.cols(); ++j) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < y_.rows(); ++i) {
      const double value = y_(i, j);
      if (std::isnan(value)) {
        has_missing_ = true;
      } else {
        sum += value;
        ++count;
      }
    }
    if (count == 0) {
      throw InvalidDataError("CurveDataset: design column " + std::to_string(j) +
                             " has no observed values");
    }
    mean_curve_[j] = sum / count;
    column_counts_[j] = count;
  }
}

Eigen::VectorXd average_curves(const CurveDataset& dataset) {
  const Eigen::MatrixXd& y = dataset.y();
  Eigen::VectorXd mean(y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      if (!std::isnan(y(i, j))) {
        sum += y(i, j);
        ++count;
      }
    }
    mean[j] = sum / static_cast<double>(count);
  }
  return mean;
}

Eigen::MatrixXd uniform_eval_points(int dim, Eigen::Index per_axis) {
  if (dim < 1) throw std::invalid_argument("uniform_eval_points: dim must be >= 1");
  if (per_axis < 1) throw std::invalid_argument("uniform_eval_points: need >= 1 point");
  Eigen::VectorXd axis(per_axis);
  if (per_axis == 1) {
    axis[0] = 0.5;
  } else {
    for (Eigen::Index i = 0; i < per_axis; ++i) {
      axis[i] = static_cast<double>(i) / static_cast<double>(per_axis - 1);
    }
  }
  Eigen::Index total = 1;
  for (int k = 0; k < dim; ++k) total *= per_axis;
  Eigen::MatrixXd points(total, dim);
  for (Eigen::Index row = 0; row < total; ++row) {
    Eigen::Index rest = row;
    for (int k = dim - 1; k >= 0; --k) {
      points(row, k) = axis[rest % per_axis];
      rest /= per_axis;
    }
  }
  return points;
}

std::vector<WeightField> estimator_weight_fields(const Grid& grid,
                                                 const EstimatorConfig& config,
                                                 const Eigen::MatrixXd& eval_points) {
  if (eval_points.cols() != grid.dim()) {
    throw std::invalid_argument("estimator_weight_fields: eval point dimension mismatch");
  }
  if (config.kind == EstimatorKind::Interpolation) {
    return interpolation_weight_fields(grid, eval_points);
  }
  const Kernel kernel = kernel_by_name(config.kernel, grid.dim());
  const MultiIndexBasis basis = monomial_basis(config.degree, grid.dim());
  return locpol_weight_fields(grid, kernel, basis, eval_points, config.h,
                              config.lambda_floor);
}

EstimateCurve estimate_on_grid(const CurveDataset& dataset,
                               const EstimatorConfig& config,
                               const Eigen::MatrixXd& eval_points) {
  const std::vector<WeightField> fields =
      estimator_weight_fields(dataset.grid(), config, eval_points);
  EstimateCurve estimate;
  estimate.eval_points = eval_points;
  estimate.config = config;
  estimate.values.resize(eval_points.rows());
  const Eigen::VectorXd& mean = dataset.mean_curve();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    estimate.values[static_cast<Eigen::Index>(i)] = fields[i].apply(mean);
  }
  return estimate;
}

double sup_norm_error(const EstimateCurve& estimate,
                      const std::function<double(const Eigen::VectorXd&)>& truth) {
  double sup = 0.0;
  for (Eigen::Index i = 0; i < estimate.values.size(); ++i) {
    const double gap =
        std::abs(estimate.values[i] - truth(estimate.eval_points.row(i).transpose()));
    sup = std::max(sup, gap);
  }
  return sup;
}

ErrorDecomposition decompose_error(
    const std::vector<WeightField>& fields,
    const std::function<double(const Eigen::VectorXd&)>& mean,
    const Eigen::VectorXd& eps_bar, const Eigen::VectorXd& z_bar,
    const Grid& grid) {
  if (eps_bar.size() != grid.total_points() || z_bar.size() != grid.total_points()) {
    throw std::invalid_argument("decompose_error: inputs must live on the design grid");
  }
  const Eigen::Index n_eval = static_cast<Eigen::Index>(fields.size());
  ErrorDecomposition parts;
  parts.bias.resize(n_eval);
  parts.noise.resize(n_eval);
  parts.process.resize(n_eval);
  for (Eigen::Index i = 0; i < n_eval; ++i) {
    const WeightField& field = fields[static_cast<std::size_t>(i)];
    const double mean_at_x = mean(field.x);
    double bias = 0.0;
    double noise = 0.0;
    double process = 0.0;
    for (const auto& e : field.entries) {
      bias += e.weight * (mean(grid.point(e.index)) - mean_at_x);
      noise += e.weight * eps_bar[e.index];
      process += e.weight * z_bar[e.index];
    }
    parts.bias[i] = bias;
    parts.noise[i] = noise;
    parts.process[i] = process;
  }
  return parts;
}

}  // namespace fdamean
