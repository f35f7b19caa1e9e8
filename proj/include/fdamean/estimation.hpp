#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "fdamean/grid.hpp"
#include "fdamean/weights.hpp"

namespace fdamean {

//! n discretely observed curves on a shared design grid. NaN cells mark
//! missing values; the cached mean curve uses available-case column means.
//! Immutable during estimation.
class CurveDataset {
public:
  CurveDataset(Grid grid, Eigen::MatrixXd y);

  Eigen::Index curve_count() const { return y_.rows(); }
  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& y() const { return y_; }
  const Eigen::VectorXd& mean_curve() const { return mean_curve_; }
  //! Observed rows per design column (equals curve_count() without NAs).
  const Eigen::VectorXi& column_counts() const { return column_counts_; }
  bool has_missing() const { return has_missing_; }

private:
  Grid grid_;
  Eigen::MatrixXd y_;
  Eigen::VectorXd mean_curve_;
  Eigen::VectorXi column_counts_;
  bool has_missing_ = false;
};

//! Column means recomputed from scratch (matches the cached mean curve).
Eigen::VectorXd average_curves(const CurveDataset& dataset);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::LocalPolynomial;
  int degree = 2;                        // polynomial total degree m
  std::string kernel = "epanechnikov";
  double h = 0.1;
  double lambda_floor = kDefaultLambdaFloor;
};

struct EstimateCurve {
  Eigen::MatrixXd eval_points;  // one evaluation point per row
  Eigen::VectorXd values;
  EstimatorConfig config;
};

//! Tensor-product evaluation grid with per_axis equispaced points per axis,
//! endpoints included (rows in row-major order, last axis fastest).
Eigen::MatrixXd uniform_eval_points(int dim, Eigen::Index per_axis);

//! Weight fields for the configured estimator at every evaluation point.
std::vector<WeightField> estimator_weight_fields(const Grid& grid,
                                                 const EstimatorConfig& config,
                                                 const Eigen::MatrixXd& eval_points);

//! Linear estimate sum_j w_j(x; h) Ybar_j at every evaluation point.
EstimateCurve estimate_on_grid(const CurveDataset& dataset,
                               const EstimatorConfig& config,
                               const Eigen::MatrixXd& eval_points);

//! Grid approximation of the sup-norm distance between estimate and truth.
double sup_norm_error(const EstimateCurve& estimate,
                      const std::function<double(const Eigen::VectorXd&)>& truth);

//! Bias / averaged-noise / averaged-process components of the estimation
//! error; their sum reconstructs mu_hat - mu exactly.
struct ErrorDecomposition {
  Eigen::VectorXd bias;     // I1(x) = sum_j w_j (mu(x_j) - mu(x))
  Eigen::VectorXd noise;    // I2(x) = sum_j w_j eps_bar_j
  Eigen::VectorXd process;  // I3(x) = sum_j w_j zbar(x_j)
};

ErrorDecomposition decompose_error(
    const std::vector<WeightField>& fields,
    const std::function<double(const Eigen::VectorXd&)>& mean,
    const Eigen::VectorXd& eps_bar, const Eigen::VectorXd& z_bar,
    const Grid& grid);

}  // namespace fdamean
