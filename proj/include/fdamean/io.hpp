#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "fdamean/bands.hpp"
#include "fdamean/bandwidth.hpp"
#include "fdamean/estimation.hpp"
#include "fdamean/simulation.hpp"

namespace fdamean {

//! Formats a double with 17 significant digits (value-preserving round trip).
std::string format_double(double value);

//! Dataset CSV (format v1):
//!   # d=<dim>
//!   # p=<p_1>,...,<p_d>
//!   <header: p^1 cells of flattened design coordinates, row-major over axes,
//!    last axis fastest; for d > 1 each cell holds d space-separated coords>
//!   <one row per curve, p^1 numeric cells; empty cell = missing>
//! Without metadata lines the file is read as d = 1.
CurveDataset read_dataset(const std::string& path);

void write_dataset(const std::string& path, const CurveDataset& dataset);

//! Keeps every k-th design point per axis, starting at the first point.
CurveDataset subsample_every(const CurveDataset& dataset, Eigen::Index keep_every);

//! Keeps the given per-axis coordinate indices (each list nonempty, strictly
//! increasing).
CurveDataset subsample_axis_indices(const CurveDataset& dataset,
                                    const std::vector<std::vector<Eigen::Index>>& keep);

//! Weight-condition diagnostics as a JSON object string.
std::string weight_diagnostics_json(const WeightDiagnostics& diagnostics);

void write_estimate_csv(const std::string& path, const EstimateCurve& estimate);
void write_band_csv(const std::string& path, const SimultaneousBand& band);
void write_replication_csv(const std::string& path, const ReplicationReport& report);
void write_rate_experiment_csv(const std::string& path,
                               const std::vector<RateExperimentRow>& rows);
void write_cv_csv(const std::string& path, const CvResult& result);

//! Declarative experiment configuration (JSON file).
struct ModelConfig {
  std::string mean = "mu0";  // mu0 | sin2pi | zero | polynomial
  std::vector<double> mean_params;  // polynomial coefficients, ascending degree
  std::string process = "brownian_motion";  // brownian_motion | none
  double sigma = 1.0;
  double alpha = 2.0;
};

struct ExperimentConfig {
  std::string mode = "replications";  // replications | rate_experiment
  ModelConfig model;
  Eigen::Index n = 600;
  std::vector<Eigen::Index> p{400};                // replications mode
  std::vector<std::vector<Eigen::Index>> p_list;   // rate_experiment mode
  EstimatorConfig estimator;
  std::string h_rule = "fixed";  // fixed | grid | optimal
  double h_step = 0.005;
  double h_max = kDefaultMaxBandwidth;
  Eigen::Index eval_points = 1001;
  Eigen::Index replications = 1000;
  std::uint64_t seed = 0;
  std::string output;
};

ExperimentConfig load_experiment_config(const std::string& path);

SimulationModel build_model(const ModelConfig& config);

}  // namespace fdamean
