#include "fdamean/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdamean/bands.hpp"
#include "fdamean/bandwidth.hpp"
#include "fdamean/errors.hpp"
#include "fdamean/estimation.hpp"
#include "fdamean/io.hpp"
#include "fdamean/rates.hpp"
#include "fdamean/simulation.hpp"

namespace fdamean {

namespace {

using nlohmann::json;

struct EstimatorFlags {
  std::string kind = "locpol";
  int degree = 2;
  std::string kernel = "epanechnikov";
  double h = 0.1;

  EstimatorConfig to_config() const {
    EstimatorConfig config;
    if (kind == "locpol") {
      config.kind = EstimatorKind::LocalPolynomial;
    } else if (kind == "interpolation") {
      config.kind = EstimatorKind::Interpolation;
    } else {
      throw std::invalid_argument("unknown estimator kind: " + kind);
    }
    config.degree = degree;
    config.kernel = kernel;
    config.h = h;
    return config;
  }
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& flags, bool require_h) {
  cmd->add_option("--kind", flags.kind, "Estimator kind: locpol | interpolation");
  cmd->add_option("--degree,-m", flags.degree, "Local polynomial total degree");
  cmd->add_option("--kernel", flags.kernel, "Kernel name: epanechnikov | triangular");
  auto* h_opt = cmd->add_option("--h", flags.h, "Bandwidth");
  if (require_h) h_opt->required();
}

json h_set_check_json(const HSetCheck& check) {
  return json{{"h", check.h},
              {"bias_term", check.bias_term},
              {"bias_bound", check.bias_bound},
              {"bias_ok", check.bias_ok},
              {"entropy_term", check.entropy_term},
              {"entropy_bound", check.entropy_bound},
              {"entropy_ok", check.entropy_ok},
              {"in_range", check.in_range},
              {"all_ok", check.all_ok()}};
}

int command_rates(Eigen::Index n, std::vector<Eigen::Index> p, int d, double alpha,
                  double c, double sigma, std::optional<double> h) {
  if (p.size() == 1 && d > 1) p.assign(static_cast<std::size_t>(d), p[0]);
  RateInputs inputs{n, p, d, alpha, c};
  inputs.validate();

  const double h_star = optimal_bandwidth(inputs);
  const OptimalRate rate = optimal_rate(inputs);
  const RegimeClassification regime = classify_regime(inputs);
  const double h_used = h.value_or(h_star);

  json out{
      {"n", n},
      {"p", p},
      {"d", d},
      {"alpha", alpha},
      {"c", c},
      {"optimal_bandwidth", h_star},
      {"optimal_rate",
       {{"value", rate.value},
        {"binding_branch", to_string(rate.branch)},
        {"discretization_term", rate.discretization_term},
        {"error_term", rate.error_term},
        {"process_term", rate.process_term}}},
      {"regime",
       {{"label", to_string(regime.regime)},
        {"sparse_threshold", regime.sparse_threshold},
        {"dense_threshold", regime.dense_threshold},
        {"note", "heuristic: asymptotic comparisons with constants taken as 1"}}},
      {"h", h_used},
      {"rate_bound_at_h", rate_bound(inputs, h_used)},
      {"interpolation_envelope",
       interpolation_error_envelope(n, inputs.total_points(), sigma)},
  };
  std::cout << out.dump(2) << "\n";
  return 0;
}

int command_estimate(const std::string& data_path, const EstimatorFlags& flags,
                     Eigen::Index eval_points, const std::string& output) {
  const CurveDataset dataset = read_dataset(data_path);
  const EstimatorConfig config = flags.to_config();
  if (eval_points <= 0) {
    // Default sup-norm grids: 1001 points for curves, 101 per axis above.
    eval_points = dataset.grid().dim() == 1 ? 1001 : 101;
  }
  const Eigen::MatrixXd points = uniform_eval_points(dataset.grid().dim(), eval_points);
  const EstimateCurve estimate = estimate_on_grid(dataset, config, points);
  write_estimate_csv(output, estimate);
  std::cerr << "estimated " << estimate.values.size() << " points from "
            << dataset.curve_count() << " curves -> " << output << "\n";
  return 0;
}

int command_cv(const std::string& data_path, EstimatorFlags flags, double h_start,
               double h_step, double h_max, const std::string& output) {
  const CurveDataset dataset = read_dataset(data_path);
  BandwidthGrid grid_spec;
  if (h_start > 0.0) {
    std::vector<double> values;
    for (double h = h_start; h <= h_max + 1e-12; h += h_step) values.push_back(h);
    if (values.empty()) values.push_back(h_start);
    grid_spec.values = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    grid_spec.rule = "explicit";
  } else {
    grid_spec = default_bandwidth_grid(dataset.grid().min_axis_count(), h_step, h_max);
  }
  const CvResult result = loocv(dataset, flags.to_config(), grid_spec);
  if (!output.empty()) write_cv_csv(output, result);
  json out{{"best_h", result.best_h},
           {"candidates", result.h_values.size()},
           {"best_score", result.scores[result.best_index]}};
  std::cout << out.dump(2) << "\n";
  std::cerr << "loocv best h = " << result.best_h << "\n";
  return 0;
}

SimultaneousBand build_band(const CurveDataset& dataset, const EstimatorConfig& config,
                            Eigen::Index eval_points, double level,
                            Eigen::Index draws, double h_gamma,
                            const std::string& mode, std::uint64_t seed,
                            EstimateCurve* fitted_out) {
  const Grid& grid = dataset.grid();
  const Eigen::MatrixXd points = uniform_eval_points(grid.dim(), eval_points);
  const EstimateCurve estimate = estimate_on_grid(dataset, config, points);

  Eigen::MatrixXd design_points(grid.total_points(), grid.dim());
  for (Eigen::Index j = 0; j < grid.total_points(); ++j) {
    design_points.row(j) = grid.point(j).transpose();
  }
  const EstimateCurve at_design = estimate_on_grid(dataset, config, design_points);
  if (fitted_out != nullptr) *fitted_out = at_design;

  const Eigen::MatrixXd residuals = residual_curves(dataset, at_design.values);
  const CovarianceEstimate cov = estimate_covariance(residuals, grid, points, h_gamma);
  const BandMode band_mode =
      mode == "studentized" ? BandMode::Studentized : BandMode::Unstudentized;
  return simultaneous_band(estimate, cov, dataset.curve_count(), level, draws,
                           Rng(seed), band_mode);
}

int command_bands(const std::string& data_path, const EstimatorFlags& flags,
                  Eigen::Index eval_points, double level, Eigen::Index draws,
                  double h_gamma, const std::string& mode, double alpha,
                  std::uint64_t seed, const std::string& output_prefix) {
  const CurveDataset dataset = read_dataset(data_path);
  const EstimatorConfig config = flags.to_config();
  const SimultaneousBand band = build_band(dataset, config, eval_points, level, draws,
                                           h_gamma, mode, seed, nullptr);
  const Grid& grid = dataset.grid();
  const HSetCheck check = h_set_check(config.h, alpha, dataset.curve_count(),
                                      grid.total_points(), grid.min_axis_count(),
                                      grid.dim());

  const std::string band_path = output_prefix + "_band.csv";
  const std::string json_path = output_prefix + "_band.json";
  write_band_csv(band_path, band);
  json out{{"quantile", band.quantile},
           {"level", band.level},
           {"mode", mode},
           {"n", dataset.curve_count()},
           {"h", config.h},
           {"h_set_check", h_set_check_json(check)},
           {"band_csv", band_path}};
  std::ofstream json_file(json_path);
  json_file << out.dump(2) << "\n";
  std::cout << out.dump(2) << "\n";
  if (!check.all_ok()) {
    std::cerr << "warning: h fails an undersmoothing check; the band level may "
                 "be off\n";
  }
  std::cerr << "band written to " << band_path << "\n";
  return 0;
}

int command_coarsen_check(const std::string& data_path, EstimatorFlags flags,
                          bool select_h_by_cv, Eigen::Index keep_every,
                          Eigen::Index eval_points, double level, Eigen::Index draws,
                          double h_gamma, const std::string& mode, double alpha,
                          std::uint64_t seed, const std::string& output) {
  const CurveDataset dataset = read_dataset(data_path);

  if (select_h_by_cv) {
    const BandwidthGrid h_grid = default_bandwidth_grid(dataset.grid().min_axis_count());
    flags.h = loocv(dataset, flags.to_config(), h_grid).best_h;
    std::cerr << "loocv selected h = " << flags.h << " on the full data\n";
  }
  const EstimatorConfig config = flags.to_config();

  const SimultaneousBand band = build_band(dataset, config, eval_points, level, draws,
                                           h_gamma, mode, seed, nullptr);

  const CurveDataset coarse = subsample_every(dataset, keep_every);
  EstimatorConfig coarse_config = config;
  // Guard against windows below the admissible floor on the thinned grid.
  coarse_config.h = std::max(config.h, min_admissible_bandwidth(coarse.grid()));
  const Eigen::MatrixXd points = uniform_eval_points(dataset.grid().dim(), eval_points);
  const EstimateCurve coarse_estimate = estimate_on_grid(coarse, coarse_config, points);

  bool inside = true;
  Eigen::Index violation_index = -1;
  double violation_excess = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double gap = std::abs(coarse_estimate.values[i] - band.center.values[i]);
    if (gap > band.halfwidth[i]) {
      inside = false;
      violation_index = i;
      violation_excess = gap - band.halfwidth[i];
      break;
    }
  }

  json out{{"inside_band", inside},
           {"keep_every", keep_every},
           {"coarse_p", coarse.grid().total_points()},
           {"full_p", dataset.grid().total_points()},
           {"h_full", config.h},
           {"h_coarse", coarse_config.h},
           {"level", level},
           {"quantile", band.quantile},
           {"h_set_check",
            h_set_check_json(h_set_check(
                config.h, alpha, dataset.curve_count(),
                dataset.grid().total_points(), dataset.grid().min_axis_count(),
                dataset.grid().dim()))}};
  if (!inside) {
    out["first_violation"] = {
        {"x", points(violation_index, 0)},
        {"excess", violation_excess},
    };
  }
  if (!output.empty()) {
    std::ofstream json_file(output);
    json_file << out.dump(2) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  if (inside) {
    std::cerr << "coarse estimate (p = " << coarse.grid().total_points()
              << ") stays inside the " << level * 100 << "% band\n";
  } else {
    std::cerr << "coarse estimate leaves the band at x = "
              << points(violation_index, 0) << " (excess " << violation_excess
              << ")\n";
  }
  return 0;
}

int command_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                     const std::string& output_override) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (seed.has_value()) config.seed = *seed;
  if (!output_override.empty()) config.output = output_override;
  if (config.output.empty()) {
    throw std::invalid_argument("simulate: no output path (config or --output)");
  }
  const SimulationModel model = build_model(config.model);
  const Rng rng(config.seed);

  if (config.mode == "replications") {
    const Grid grid = uniform_grid(config.p);
    Eigen::MatrixXd points = uniform_eval_points(grid.dim(), config.eval_points);
    EstimatorConfig estimator = config.estimator;
    if (config.h_rule == "optimal") {
      RateInputs inputs{config.n, config.p, grid.dim(), config.model.alpha, 3.0};
      estimator.h = optimal_bandwidth(inputs);
    }
    const ReplicationReport report = run_replications(
        model, config.n, grid, estimator, points, config.replications, rng);
    write_replication_csv(config.output, report);
    json out{{"mode", "replications"},
             {"n", config.n},
             {"p", config.p},
             {"h", estimator.h},
             {"replications", config.replications},
             {"failures", report.failures},
             {"mean_sup_error", report.total.mean},
             {"sd_sup_error", report.total.sd},
             {"mean_bias", report.bias.mean},
             {"mean_noise", report.noise.mean},
             {"mean_process", report.process.mean},
             {"runtime_seconds", report.runtime_seconds},
             {"output", config.output}};
    std::cout << out.dump(2) << "\n";
    std::cerr << "replication report -> " << config.output << "\n";
    return 0;
  }

  if (config.mode == "rate_experiment") {
    if (config.p_list.empty()) {
      throw std::invalid_argument("simulate: rate_experiment needs p_list");
    }
    std::vector<std::pair<Eigen::Index, std::vector<Eigen::Index>>> configs;
    configs.reserve(config.p_list.size());
    for (const auto& p : config.p_list) configs.emplace_back(config.n, p);

    const double h_step = config.h_step;
    const double h_max = config.h_max;
    const EstimatorConfig estimator = config.estimator;
    const std::string h_rule = config.h_rule;
    const double fixed_h = config.estimator.h;
    const auto rule = [h_step, h_max, h_rule, fixed_h](Eigen::Index p_min) {
      if (h_rule == "fixed") {
        return Eigen::VectorXd::Constant(1, fixed_h).eval();
      }
      return default_bandwidth_grid(p_min, h_step, h_max).values;
    };
    const std::vector<RateExperimentRow> rows =
        rate_experiment(model, configs, rule, estimator, config.eval_points,
                        config.replications, rng);
    write_rate_experiment_csv(config.output, rows);
    json summary = json::array();
    for (const auto& row : rows) {
      summary.push_back({{"n", row.n},
                         {"p", row.p},
                         {"best_h", row.best_h},
                         {"best_error", row.best_error}});
    }
    json out{{"mode", "rate_experiment"},
             {"rows", summary},
             {"output", config.output}};
    std::cout << out.dump(2) << "\n";
    std::cerr << "rate experiment table -> " << config.output << "\n";
    return 0;
  }

  throw std::invalid_argument("simulate: unknown mode '" + config.mode + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Mean-function estimation for discretely observed random curves"};
  app.require_subcommand(1);
  // --h is a bandwidth everywhere; keep help on the long flag only.
  app.set_help_flag("--help", "Print help and exit");

  // rates
  Eigen::Index rates_n = 600;
  std::vector<Eigen::Index> rates_p{400};
  int rates_d = 1;
  double rates_alpha = 2.0;
  double rates_c = 3.0;
  double rates_sigma = 1.0;
  double rates_h = -1.0;
  auto* rates_cmd = app.add_subcommand(
      "rates", "Closed-form rate and bandwidth formulas with the binding branch");
  rates_cmd->set_help_flag("--help", "Print help and exit");
  rates_cmd->add_option("--n", rates_n, "Number of curves")->required();
  rates_cmd->add_option("--p", rates_p, "Design points per axis (comma separated)")
      ->required()
      ->delimiter(',');
  rates_cmd->add_option("--d", rates_d, "Dimension");
  rates_cmd->add_option("--alpha", rates_alpha, "Hölder smoothness of the mean");
  rates_cmd->add_option("--c", rates_c, "Bandwidth floor constant");
  rates_cmd->add_option("--sigma", rates_sigma, "Noise standard deviation");
  rates_cmd->add_option("--h", rates_h, "Evaluate the rate bound at this h");

  // estimate
  std::string est_data;
  EstimatorFlags est_flags;
  Eigen::Index est_eval = 0;  // 0: pick by dimension
  std::string est_output;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate the mean curve from a dataset");
  est_cmd->set_help_flag("--help", "Print help and exit");
  est_cmd->add_option("--data", est_data, "Dataset CSV")->required();
  add_estimator_flags(est_cmd, est_flags, false);
  est_cmd->add_option("--eval-points", est_eval, "Evaluation points per axis");
  est_cmd->add_option("--output,-o", est_output, "Estimate CSV path")->required();

  // cv
  std::string cv_data;
  EstimatorFlags cv_flags;
  double cv_h_start = -1.0;
  double cv_h_step = 0.005;
  double cv_h_max = kDefaultMaxBandwidth;
  std::string cv_output;
  auto* cv_cmd =
      app.add_subcommand("cv", "Leave-one-curve-out cross validation for the bandwidth");
  cv_cmd->set_help_flag("--help", "Print help and exit");
  cv_cmd->add_option("--data", cv_data, "Dataset CSV")->required();
  add_estimator_flags(cv_cmd, cv_flags, false);
  cv_cmd->add_option("--h-start", cv_h_start,
                     "First candidate bandwidth (default 3/p_min)");
  cv_cmd->add_option("--h-step", cv_h_step, "Candidate step");
  cv_cmd->add_option("--h-max", cv_h_max, "Last candidate bandwidth");
  cv_cmd->add_option("--output,-o", cv_output, "Score table CSV path");

  // bands
  std::string bands_data;
  EstimatorFlags bands_flags;
  Eigen::Index bands_eval = 201;
  double bands_level = 0.95;
  Eigen::Index bands_draws = 10000;
  double bands_h_gamma = 0.0;
  std::string bands_mode = "unstudentized";
  double bands_alpha = 2.0;
  std::uint64_t bands_seed = 0;
  std::string bands_prefix;
  auto* bands_cmd =
      app.add_subcommand("bands", "Simultaneous confidence band from the CLT");
  bands_cmd->set_help_flag("--help", "Print help and exit");
  bands_cmd->add_option("--data", bands_data, "Dataset CSV")->required();
  add_estimator_flags(bands_cmd, bands_flags, true);
  bands_cmd->add_option("--eval-points", bands_eval, "Evaluation points per axis");
  bands_cmd->add_option("--level", bands_level, "Simultaneous coverage level");
  bands_cmd->add_option("--draws", bands_draws, "Gaussian sup-quantile draws");
  bands_cmd->add_option("--h-gamma", bands_h_gamma, "Covariance smoothing radius");
  bands_cmd->add_option("--mode", bands_mode, "unstudentized | studentized");
  bands_cmd->add_option("--alpha", bands_alpha, "Smoothness for the H-set check");
  bands_cmd->add_option("--seed", bands_seed, "RNG seed")->required();
  bands_cmd->add_option("--output-prefix,-o", bands_prefix, "Output path prefix")
      ->required();

  // coarsen-check
  std::string cc_data;
  EstimatorFlags cc_flags;
  bool cc_cv = false;
  Eigen::Index cc_keep = 2;
  Eigen::Index cc_eval = 201;
  double cc_level = 0.95;
  Eigen::Index cc_draws = 10000;
  double cc_h_gamma = 0.0;
  std::string cc_mode = "unstudentized";
  double cc_alpha = 2.0;
  std::uint64_t cc_seed = 0;
  std::string cc_output;
  auto* cc_cmd = app.add_subcommand(
      "coarsen-check",
      "Check whether a coarser-discretization estimate stays inside the band");
  cc_cmd->set_help_flag("--help", "Print help and exit");
  cc_cmd->add_option("--data", cc_data, "Dataset CSV")->required();
  add_estimator_flags(cc_cmd, cc_flags, false);
  cc_cmd->add_flag("--cv", cc_cv, "Select h by leave-one-curve-out CV");
  cc_cmd->add_option("--keep-every", cc_keep, "Keep every k-th design point per axis")
      ->required();
  cc_cmd->add_option("--eval-points", cc_eval, "Evaluation points per axis");
  cc_cmd->add_option("--level", cc_level, "Simultaneous coverage level");
  cc_cmd->add_option("--draws", cc_draws, "Gaussian sup-quantile draws");
  cc_cmd->add_option("--h-gamma", cc_h_gamma, "Covariance smoothing radius");
  cc_cmd->add_option("--mode", cc_mode, "unstudentized | studentized");
  cc_cmd->add_option("--alpha", cc_alpha, "Smoothness for the H-set check");
  cc_cmd->add_option("--seed", cc_seed, "RNG seed")->required();
  cc_cmd->add_option("--output,-o", cc_output, "Verdict JSON path");

  // simulate
  std::string sim_config;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  std::string sim_output;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Run a replicated experiment from a config file");
  sim_cmd->set_help_flag("--help", "Print help and exit");
  sim_cmd->add_option("--config", sim_config, "Experiment config (JSON)")->required();
  sim_cmd->add_option("--seed", sim_seed, "Override the config seed")
      ->each([&sim_seed_set](const std::string&) { sim_seed_set = true; });
  sim_cmd->add_option("--output,-o", sim_output, "Override the config output path");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fdamean");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (rates_cmd->parsed()) {
      return command_rates(rates_n, rates_p, rates_d, rates_alpha, rates_c,
                           rates_sigma,
                           rates_h > 0.0 ? std::optional<double>(rates_h)
                                         : std::nullopt);
    }
    if (est_cmd->parsed()) {
      return command_estimate(est_data, est_flags, est_eval, est_output);
    }
    if (cv_cmd->parsed()) {
      return command_cv(cv_data, cv_flags, cv_h_start, cv_h_step, cv_h_max, cv_output);
    }
    if (bands_cmd->parsed()) {
      return command_bands(bands_data, bands_flags, bands_eval, bands_level,
                           bands_draws, bands_h_gamma, bands_mode, bands_alpha,
                           bands_seed, bands_prefix);
    }
    if (cc_cmd->parsed()) {
      return command_coarsen_check(cc_data, cc_flags, cc_cv, cc_keep, cc_eval,
                                   cc_level, cc_draws, cc_h_gamma, cc_mode, cc_alpha,
                                   cc_seed, cc_output);
    }
    if (sim_cmd->parsed()) {
      return command_simulate(sim_config,
                              sim_seed_set ? std::optional<std::uint64_t>(sim_seed)
                                           : std::nullopt,
                              sim_output);
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidDataError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace fdamean
