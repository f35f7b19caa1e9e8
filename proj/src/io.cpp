#include "fdamean/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fdamean/errors.hpp"
#include "fdamean/rates.hpp"

namespace fdamean {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, std::size_t line_number) {
  const std::string cell = trim(raw);
  if (cell.empty() || cell == "NA" || cell == "na" || cell == "nan" || cell == "NaN") {
    return kNaN;
  }
  std::size_t consumed = 0;
  double value;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + cell + "'", line_number);
  }
  if (consumed != cell.size()) {
    throw ParseError("trailing characters in cell: '" + cell + "'", line_number);
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CurveDataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path, 0);

  std::string line;
  std::size_t line_number = 0;
  int d = 1;
  std::vector<Eigen::Index> p;
  bool have_p = false;

  // Metadata comment lines, then the coordinate header.
  std::string header;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      const std::string body = trim(stripped.substr(1));
      if (body.rfind("d=", 0) == 0) {
        d = std::stoi(body.substr(2));
        if (d < 1) throw ParseError("dimension must be >= 1", line_number);
      } else if (body.rfind("p=", 0) == 0) {
        p.clear();
        for (const std::string& cell : split(body.substr(2), ',')) {
          p.push_back(static_cast<Eigen::Index>(std::stol(trim(cell))));
        }
        have_p = true;
      }
      continue;
    }
    header = stripped;
    break;
  }
  if (header.empty()) throw ParseError("missing coordinate header", line_number);

  const std::vector<std::string> header_cells = split(header, ',');
  const auto total = static_cast<Eigen::Index>(header_cells.size());
  if (!have_p) p.assign(1, total);
  if (static_cast<int>(p.size()) != d) {
    throw ParseError("per-axis counts do not match declared dimension", line_number);
  }
  Eigen::Index expected = 1;
  for (const Eigen::Index pk : p) expected *= pk;
  if (expected != total) {
    throw ParseError("header has " + std::to_string(total) + " cells, expected " +
                         std::to_string(expected),
                     line_number);
  }

  // Flattened coordinates, row-major with the last axis fastest.
  Eigen::MatrixXd coords(total, d);
  for (Eigen::Index j = 0; j < total; ++j) {
    std::istringstream cell(header_cells[static_cast<std::size_t>(j)]);
    for (int k = 0; k < d; ++k) {
      if (!(cell >> coords(j, k))) {
        throw ParseError("bad coordinate cell: '" +
                             header_cells[static_cast<std::size_t>(j)] + "'",
                         line_number);
      }
    }
  }

  // Recover per-axis coordinates and verify the product structure.
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(d));
  stride[static_cast<std::size_t>(d) - 1] = 1;
  for (int k = d - 2; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] =
        stride[static_cast<std::size_t>(k) + 1] * p[static_cast<std::size_t>(k) + 1];
  }
  std::vector<Eigen::VectorXd> axes;
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd axis(p[static_cast<std::size_t>(k)]);
    for (Eigen::Index l = 0; l < axis.size(); ++l) {
      axis[l] = coords(l * stride[static_cast<std::size_t>(k)], k);
      if (l > 0 && axis[l] <= axis[l - 1]) {
        throw InvalidDataError("axis " + std::to_string(k) +
                               " is not strictly increasing");
      }
    }
    axes.push_back(std::move(axis));
  }
  Grid grid = [&] {
    try {
      return Grid(std::move(axes));
    } catch (const std::invalid_argument& e) {
      throw InvalidDataError(std::string("invalid design grid: ") + e.what());
    }
  }();
  for (Eigen::Index j = 0; j < total; ++j) {
    if ((grid.point(j) - coords.row(j).transpose()).lpNorm<Eigen::Infinity>() > 1e-12) {
      throw InvalidDataError("header coordinates are not a Cartesian product design");
    }
  }

  // Data rows.
  std::vector<Eigen::VectorXd> rows;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::vector<std::string> cells = split(stripped, ',');
    if (static_cast<Eigen::Index>(cells.size()) != total) {
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(total),
                       line_number);
    }
    Eigen::VectorXd row(total);
    for (Eigen::Index j = 0; j < total; ++j) {
      row[j] = parse_cell(cells[static_cast<std::size_t>(j)], line_number);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("dataset has no curve rows", line_number);

  Eigen::MatrixXd y(static_cast<Eigen::Index>(rows.size()), total);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return CurveDataset(std::move(grid), std::move(y));
}

void write_dataset(const std::string& path, const CurveDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  const Grid& grid = dataset.grid();
  out << "# d=" << grid.dim() << "\n# p=";
  for (int k = 0; k < grid.dim(); ++k) {
    out << (k > 0 ? "," : "") << grid.axis_count(k);
  }
  out << "\n";
  for (Eigen::Index j = 0; j < grid.total_points(); ++j) {
    if (j > 0) out << ",";
    const Eigen::VectorXd point = grid.point(j);
    for (int k = 0; k < grid.dim(); ++k) {
      if (k > 0) out << " ";
      out << format_double(point[k]);
    }
  }
  out << "\n";
  const Eigen::MatrixXd& y = dataset.y();
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      if (j > 0) out << ",";
      if (!std::isnan(y(i, j))) out << format_double(y(i, j));
    }
    out << "\n";
  }
}

CurveDataset subsample_every(const CurveDataset& dataset, Eigen::Index keep_every) {
  if (keep_every < 1) throw std::invalid_argument("subsample_every: stride must be >= 1");
  const Grid& grid = dataset.grid();
  std::vector<std::vector<Eigen::Index>> keep(static_cast<std::size_t>(grid.dim()));
  for (int k = 0; k < grid.dim(); ++k) {
    for (Eigen::Index l = 0; l < grid.axis_count(k); l += keep_every) {
      keep[static_cast<std::size_t>(k)].push_back(l);
    }
  }
  return subsample_axis_indices(dataset, keep);
}

CurveDataset subsample_axis_indices(const CurveDataset& dataset,
                                    const std::vector<std::vector<Eigen::Index>>& keep) {
  const Grid& grid = dataset.grid();
  if (static_cast<int>(keep.size()) != grid.dim()) {
    throw std::invalid_argument("subsample: one index list per axis required");
  }
  std::vector<Eigen::VectorXd> axes;
  Eigen::Index new_total = 1;
  for (int k = 0; k < grid.dim(); ++k) {
    const auto& list = keep[static_cast<std::size_t>(k)];
    if (list.empty()) throw std::invalid_argument("subsample: empty selection on axis");
    Eigen::VectorXd axis(static_cast<Eigen::Index>(list.size()));
    for (std::size_t l = 0; l < list.size(); ++l) {
      if (list[l] < 0 || list[l] >= grid.axis_count(k)) {
        throw std::invalid_argument("subsample: index out of range");
      }
      axis[static_cast<Eigen::Index>(l)] = grid.axis(k)[list[l]];
    }
    new_total *= axis.size();
    axes.push_back(std::move(axis));
  }

  // Map new flat indices to old flat indices.
  std::vector<Eigen::Index> old_stride(static_cast<std::size_t>(grid.dim()));
  old_stride[static_cast<std::size_t>(grid.dim()) - 1] = 1;
  for (int k = grid.dim() - 2; k >= 0; --k) {
    old_stride[static_cast<std::size_t>(k)] =
        old_stride[static_cast<std::size_t>(k) + 1] * grid.axis_count(k + 1);
  }
  Eigen::MatrixXd y(dataset.y().rows(), new_total);
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(grid.dim()), 0);
  for (Eigen::Index col = 0; col < new_total; ++col) {
    Eigen::Index old_flat = 0;
    for (int k = 0; k < grid.dim(); ++k) {
      const auto ks = static_cast<std::size_t>(k);
      old_flat += keep[ks][static_cast<std::size_t>(pick[ks])] * old_stride[ks];
    }
    y.col(col) = dataset.y().col(old_flat);
    for (int k = grid.dim() - 1; k >= 0; --k) {
      const auto ks = static_cast<std::size_t>(k);
      if (static_cast<std::size_t>(++pick[ks]) < keep[ks].size()) break;
      pick[ks] = 0;
    }
  }
  return CurveDataset(Grid(std::move(axes)), std::move(y));
}

std::string weight_diagnostics_json(const WeightDiagnostics& diagnostics) {
  const nlohmann::json j{{"sum_error", diagnostics.sum_error},
                         {"max_moment_residual", diagnostics.max_moment_residual},
                         {"locality_violations", diagnostics.locality_violations},
                         {"sup_weight_scaled", diagnostics.sup_weight_scaled},
                         {"abs_weight_sum", diagnostics.abs_weight_sum}};
  return j.dump();
}

void write_estimate_csv(const std::string& path, const EstimateCurve& estimate) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  const Eigen::Index d = estimate.eval_points.cols();
  for (Eigen::Index k = 0; k < d; ++k) out << "x_" << (k + 1) << ",";
  out << "value\n";
  for (Eigen::Index i = 0; i < estimate.values.size(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      out << format_double(estimate.eval_points(i, k)) << ",";
    }
    out << format_double(estimate.values[i]) << "\n";
  }
}

void write_band_csv(const std::string& path, const SimultaneousBand& band) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  const Eigen::Index d = band.center.eval_points.cols();
  for (Eigen::Index k = 0; k < d; ++k) out << "x_" << (k + 1) << ",";
  out << "center,lower,upper\n";
  const Eigen::VectorXd lower = band.lower();
  const Eigen::VectorXd upper = band.upper();
  for (Eigen::Index i = 0; i < band.center.values.size(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      out << format_double(band.center.eval_points(i, k)) << ",";
    }
    out << format_double(band.center.values[i]) << ","
        << format_double(lower[i]) << "," << format_double(upper[i]) << "\n";
  }
}

void write_replication_csv(const std::string& path, const ReplicationReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "replication,total,bias,noise,process,ok,error\n";
  for (std::size_t r = 0; r < report.records.size(); ++r) {
    const ReplicationRecord& record = report.records[r];
    out << r << ",";
    if (record.ok) {
      out << format_double(record.total) << "," << format_double(record.bias) << ","
          << format_double(record.noise) << "," << format_double(record.process)
          << ",1,\n";
    } else {
      out << ",,,,0," << record.error << "\n";
    }
  }
}

void write_rate_experiment_csv(const std::string& path,
                               const std::vector<RateExperimentRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "n,p,h,mean_sup_error,is_best\n";
  for (const auto& row : rows) {
    std::string p_label;
    for (std::size_t k = 0; k < row.p.size(); ++k) {
      p_label += (k > 0 ? "x" : "") + std::to_string(row.p[k]);
    }
    for (Eigen::Index i = 0; i < row.h_values.size(); ++i) {
      out << row.n << "," << p_label << "," << format_double(row.h_values[i]) << ",";
      if (!std::isnan(row.mean_errors[i])) out << format_double(row.mean_errors[i]);
      out << "," << (row.h_values[i] == row.best_h ? 1 : 0) << "\n";
    }
  }
}

void write_cv_csv(const std::string& path, const CvResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "h,score,is_best\n";
  for (Eigen::Index i = 0; i < result.h_values.size(); ++i) {
    out << format_double(result.h_values[i]) << ",";
    if (!std::isnan(result.scores[i])) out << format_double(result.scores[i]);
    out << "," << (i == result.best_index ? 1 : 0) << "\n";
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path, 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what(), 0);
  }

  ExperimentConfig config;
  try {
    config.mode = j.value("mode", config.mode);
    if (j.contains("model")) {
      const auto& m = j["model"];
      config.model.mean = m.value("mean", config.model.mean);
      if (m.contains("mean_params")) {
        config.model.mean_params = m["mean_params"].get<std::vector<double>>();
      }
      config.model.process = m.value("process", config.model.process);
      config.model.sigma = m.value("sigma", config.model.sigma);
      config.model.alpha = m.value("alpha", config.model.alpha);
    }
    config.n = j.value("n", config.n);
    if (j.contains("p")) {
      if (j["p"].is_array()) {
        config.p = j["p"].get<std::vector<Eigen::Index>>();
      } else {
        config.p = {j["p"].get<Eigen::Index>()};
      }
    }
    if (j.contains("p_list")) {
      for (const auto& entry : j["p_list"]) {
        if (entry.is_array()) {
          config.p_list.push_back(entry.get<std::vector<Eigen::Index>>());
        } else {
          config.p_list.push_back({entry.get<Eigen::Index>()});
        }
      }
    }
    if (j.contains("estimator")) {
      const auto& e = j["estimator"];
      const std::string kind = e.value("kind", std::string("locpol"));
      if (kind == "locpol") {
        config.estimator.kind = EstimatorKind::LocalPolynomial;
      } else if (kind == "interpolation") {
        config.estimator.kind = EstimatorKind::Interpolation;
      } else {
        throw ParseError("unknown estimator kind: " + kind, 0);
      }
      config.estimator.degree = e.value("degree", config.estimator.degree);
      config.estimator.kernel = e.value("kernel", config.estimator.kernel);
      if (e.contains("h")) {
        config.estimator.h = e["h"].get<double>();
        config.h_rule = "fixed";
      }
      if (e.contains("h_rule")) config.h_rule = e["h_rule"].get<std::string>();
    }
    config.h_step = j.value("h_step", config.h_step);
    config.h_max = j.value("h_max", config.h_max);
    config.eval_points = j.value("eval_points", config.eval_points);
    config.replications = j.value("replications", config.replications);
    if (!j.contains("seed")) throw ParseError("config must set a seed", 0);
    config.seed = j["seed"].get<std::uint64_t>();
    config.output = j.value("output", config.output);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config value: ") + e.what(), 0);
  }
  return config;
}

SimulationModel build_model(const ModelConfig& config) {
  SimulationModel model;
  model.sigma = config.sigma;
  model.alpha = config.alpha;
  if (config.mean == "mu0") {
    model.mean = [](const Eigen::VectorXd& x) { return mean_mu0(x[0]); };
  } else if (config.mean == "sin2pi") {
    model.mean = [](const Eigen::VectorXd& x) {
      return std::sin(2.0 * std::numbers::pi * x[0]);
    };
  } else if (config.mean == "zero") {
    model.mean = [](const Eigen::VectorXd&) { return 0.0; };
  } else if (config.mean == "polynomial") {
    const std::vector<double> coeffs = config.mean_params;
    model.mean = [coeffs](const Eigen::VectorXd& x) {
      double value = 0.0;
      double power = 1.0;
      for (const double c : coeffs) {
        value += c * power;
        power *= x[0];
      }
      return value;
    };
  } else {
    throw std::invalid_argument("unknown mean function: " + config.mean);
  }
  if (config.process == "brownian_motion") {
    model.process = ProcessKind::BrownianMotion;
  } else if (config.process == "none") {
    model.process = ProcessKind::None;
  } else {
    throw std::invalid_argument("unknown process kind: " + config.process);
  }
  return model;
}

}  // namespace fdamean
