#include "fdamean/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace fdamean {

Eigen::Index RateInputs::total_points() const {
  Eigen::Index total = 1;
  for (const Eigen::Index pk : p) total *= pk;
  return total;
}

Eigen::Index RateInputs::min_axis_count() const {
  Eigen::Index m = p.empty() ? 0 : p.front();
  for (const Eigen::Index pk : p) m = std::min(m, pk);
  return m;
}

void RateInputs::validate() const {
  if (n < 1) throw std::invalid_argument("RateInputs: n must be >= 1");
  if (p.empty() || static_cast<int>(p.size()) != d) {
    throw std::invalid_argument("RateInputs: need one axis count per dimension");
  }
  for (const Eigen::Index pk : p) {
    if (pk < 1) throw std::invalid_argument("RateInputs: axis counts must be >= 1");
  }
  if (alpha <= 0.0) throw std::invalid_argument("RateInputs: alpha must be positive");
  if (c <= 0.0) throw std::invalid_argument("RateInputs: c must be positive");
}

double rate_bound(const RateInputs& inputs, double h) {
  inputs.validate();
  if (h <= 0.0 || h >= 1.0) {
    throw std::invalid_argument("rate_bound: h must lie in (0, 1)");
  }
  const double np1 = static_cast<double>(inputs.n) *
                     static_cast<double>(inputs.total_points());
  const double bias = std::pow(h, inputs.alpha);
  const double errors = std::sqrt(std::log(1.0 / h) / (np1 * std::pow(h, inputs.d)));
  const double process = 1.0 / std::sqrt(static_cast<double>(inputs.n));
  return std::max({bias, errors, process});
}

double optimal_bandwidth(const RateInputs& inputs) {
  inputs.validate();
  const double floor = inputs.c / static_cast<double>(inputs.min_axis_count());
  const double np1 = static_cast<double>(inputs.n) *
                     static_cast<double>(inputs.total_points());
  const double balanced = std::pow(std::log(np1) / np1, 1.0 / (2.0 * inputs.alpha + inputs.d));
  return std::max(floor, balanced);
}

std::string to_string(RateBranch branch) {
  switch (branch) {
    case RateBranch::Discretization: return "discretization";
    case RateBranch::Errors: return "errors";
    case RateBranch::Process: return "process";
  }
  return "unknown";
}

OptimalRate optimal_rate(const RateInputs& inputs) {
  inputs.validate();
  const double np1 = static_cast<double>(inputs.n) *
                     static_cast<double>(inputs.total_points());
  OptimalRate rate;
  rate.discretization_term =
      std::pow(static_cast<double>(inputs.min_axis_count()), -inputs.alpha);
  rate.error_term =
      std::pow(std::log(np1) / np1, inputs.alpha / (2.0 * inputs.alpha + inputs.d));
  rate.process_term = 1.0 / std::sqrt(static_cast<double>(inputs.n));
  rate.value = rate.discretization_term;
  rate.branch = RateBranch::Discretization;
  if (rate.error_term > rate.value) {
    rate.value = rate.error_term;
    rate.branch = RateBranch::Errors;
  }
  if (rate.process_term > rate.value) {
    rate.value = rate.process_term;
    rate.branch = RateBranch::Process;
  }
  return rate;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Sparse: return "sparse";
    case Regime::Intermediate: return "intermediate";
    case Regime::Dense: return "dense";
  }
  return "unknown";
}

RegimeClassification classify_regime(const RateInputs& inputs) {
  inputs.validate();
  const double n = static_cast<double>(inputs.n);
  const double log_n = std::log(std::max(n, 2.0));
  RegimeClassification out;
  out.sparse_threshold = std::pow(n / log_n, 1.0 / (2.0 * inputs.alpha));
  out.dense_threshold =
      std::pow(log_n, 1.0 / inputs.d) * std::pow(n, 1.0 / (2.0 * inputs.alpha));
  const double p_min = static_cast<double>(inputs.min_axis_count());
  if (p_min <= out.sparse_threshold) {
    out.regime = Regime::Sparse;
  } else if (p_min >= out.dense_threshold) {
    out.regime = Regime::Dense;
  } else {
    out.regime = Regime::Intermediate;
  }
  return out;
}

double interpolation_error_envelope(Eigen::Index n, Eigen::Index total_points,
                                    double sigma) {
  if (total_points < 2) {
    throw std::invalid_argument("interpolation_error_envelope: need p^1 >= 2");
  }
  if (n < 1) throw std::invalid_argument("interpolation_error_envelope: n must be >= 1");
  if (sigma < 0.0) {
    throw std::invalid_argument("interpolation_error_envelope: sigma must be >= 0");
  }
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(total_points)) /
                           static_cast<double>(n));
}

double slight_smoothing_bandwidth(Eigen::Index n, Eigen::Index p_min, int d,
                                  double delta) {
  if (n < 2 || p_min < 1 || d < 1) {
    throw std::invalid_argument("slight_smoothing_bandwidth: invalid inputs");
  }
  return std::pow(std::log(static_cast<double>(n)), delta / d) /
         static_cast<double>(p_min);
}

}  // namespace fdamean
