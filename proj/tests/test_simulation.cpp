#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "fdamean/bandwidth.hpp"
#include "fdamean/simulation.hpp"

using namespace fdamean;

namespace {

SimulationModel mu0_model(ProcessKind process, double sigma) {
  SimulationModel model;
  model.mean = [](const Eigen::VectorXd& x) { return mean_mu0(x[0]); };
  model.process = process;
  model.sigma = sigma;
  return model;
}

}  // namespace

TEST_CASE("mean_mu0 values and odd symmetry about 0.5") {
  CHECK(mean_mu0(0.5) == doctest::Approx(0.0));
  CHECK(mean_mu0(0.75) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
  CHECK(mean_mu0(0.75) == doctest::Approx(-0.367879441).epsilon(1e-8));
  for (double t = 0.02; t < 0.5; t += 0.03) {
    CHECK(mean_mu0(0.5 + t) == doctest::Approx(-mean_mu0(0.5 - t)).epsilon(1e-12));
  }
}

TEST_CASE("Brownian motion moments") {
  Eigen::VectorXd coords(3);
  coords << 0.3, 0.5, 0.7;
  const int reps = 100000;
  Rng rng(2025);
  double sum_b05 = 0.0;
  double sum_sq_b05 = 0.0;
  double sum_prod = 0.0;
  for (int r = 0; r < reps; ++r) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(r));
    const Eigen::VectorXd path = sample_brownian(coords, stream);
    sum_b05 += path[1];
    sum_sq_b05 += path[1] * path[1];
    sum_prod += path[0] * path[2];
  }
  const double var_b05 = sum_sq_b05 / reps - std::pow(sum_b05 / reps, 2);
  CHECK(var_b05 == doctest::Approx(0.5).epsilon(0.03));      // Var B(t) = t
  CHECK(sum_prod / reps == doctest::Approx(0.3).epsilon(0.03));  // Cov = min(s, t)
}

TEST_CASE("Brownian motion starts at zero and validates input") {
  Eigen::VectorXd with_zero(3);
  with_zero << 0.0, 0.4, 0.9;
  Rng rng(3);
  const Eigen::VectorXd path = sample_brownian(with_zero, rng);
  CHECK(path[0] == 0.0);

  Eigen::VectorXd unsorted(3);
  unsorted << 0.5, 0.3, 0.9;
  CHECK_THROWS_AS(sample_brownian(unsorted, rng), std::invalid_argument);
}

TEST_CASE("Brownian increments satisfy the path-roughness sanity bound") {
  // max |dB| / dt^0.45 stays of the same order as p grows.
  Rng rng(606);
  std::vector<double> ratios;
  for (const Eigen::Index p : {100, 400, 1600}) {
    const Grid grid = uniform_grid({p});
    double max_ratio = 0.0;
    for (int r = 0; r < 20; ++r) {
      Rng stream = rng.substream(static_cast<std::uint64_t>(p + r));
      const Eigen::VectorXd path = sample_brownian(grid.axis(0), stream);
      for (Eigen::Index l = 1; l < p; ++l) {
        const double dt = grid.axis(0)[l] - grid.axis(0)[l - 1];
        max_ratio = std::max(max_ratio,
                             std::abs(path[l] - path[l - 1]) / std::pow(dt, 0.45));
      }
    }
    ratios.push_back(max_ratio);
  }
  CHECK(ratios[2] / ratios[0] < 3.0);
}

TEST_CASE("averaged sampling has the advertised variances") {
  const Grid grid = uniform_grid({5});
  SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 1.0);
  const Eigen::Index n = 100;
  const int reps = 100000;
  Rng rng(11);
  double sum_sq_eps = 0.0;
  double sum_sq_z_end = 0.0;
  for (int r = 0; r < reps; ++r) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(r));
    const AveragedSample sample = sample_averaged(model, n, grid, stream);
    sum_sq_eps += sample.eps_bar[2] * sample.eps_bar[2];
    sum_sq_z_end += sample.z_bar[4] * sample.z_bar[4];
  }
  // Var(eps_bar) = sigma^2 / n.
  CHECK(sum_sq_eps / reps == doctest::Approx(0.01).epsilon(0.05));
  // Var(zbar at t) = t / n for the Brownian process; last point t = 0.9.
  CHECK(sum_sq_z_end / reps == doctest::Approx(0.9 / 100.0).epsilon(0.05));
}

TEST_CASE("custom noise hook averages explicit draws") {
  const Grid grid = uniform_grid({4});
  SimulationModel model = mu0_model(ProcessKind::None, 2.0);
  // Uniform on [-sqrt(3), sqrt(3)]: mean zero, unit variance.
  model.custom_noise = [](Rng& rng) {
    return rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
  };
  const Eigen::Index n = 25;
  Rng rng(88);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(r));
    const AveragedSample sample = sample_averaged(model, n, grid, stream);
    sum += sample.eps_bar[1];
    sum_sq += sample.eps_bar[1] * sample.eps_bar[1];
  }
  const double mean = sum / reps;
  const double variance = sum_sq / reps - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  // Var(eps_bar) = sigma^2 / n = 4 / 25.
  CHECK(variance == doctest::Approx(0.16).epsilon(0.05));
}

TEST_CASE("averaged shortcut matches explicit n-row sampling in law") {
  // Compare the first two moments of Ybar at three design points.
  const Grid grid = uniform_grid({3});
  SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 0.8);
  const Eigen::Index n = 4;
  const int reps = 100000;
  Rng rng(21);

  Eigen::VectorXd mean_direct = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd mean_shortcut = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd sq_direct = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd sq_shortcut = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd mu(3);
  for (Eigen::Index j = 0; j < 3; ++j) mu[j] = mean_mu0(grid.axis(0)[j]);

  for (int r = 0; r < reps; ++r) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(r));
    // Explicit rows: average of n independent curves.
    Eigen::VectorXd ybar = Eigen::VectorXd::Zero(3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd path = sample_brownian(grid.axis(0), stream);
      for (Eigen::Index j = 0; j < 3; ++j) {
        ybar[j] += mu[j] + path[j] + model.sigma * stream.normal();
      }
    }
    ybar /= static_cast<double>(n);
    mean_direct += ybar;
    sq_direct += ybar.cwiseProduct(ybar);

    Rng stream2 = rng.substream(static_cast<std::uint64_t>(reps + r));
    const AveragedSample sample = sample_averaged(model, n, grid, stream2);
    const Eigen::VectorXd ybar2 = mu + sample.z_bar + sample.eps_bar;
    mean_shortcut += ybar2;
    sq_shortcut += ybar2.cwiseProduct(ybar2);
  }
  for (Eigen::Index j = 0; j < 3; ++j) {
    const double var_direct = sq_direct[j] / reps - std::pow(mean_direct[j] / reps, 2);
    const double var_shortcut =
        sq_shortcut[j] / reps - std::pow(mean_shortcut[j] / reps, 2);
    CHECK(mean_shortcut[j] / reps == doctest::Approx(mu[j]).epsilon(0.03));
    CHECK(mean_direct[j] / reps == doctest::Approx(mu[j]).epsilon(0.03));
    CHECK(var_shortcut == doctest::Approx(var_direct).epsilon(0.03));
  }
}

TEST_CASE("covariance-specified Gaussian process matches the Brownian law") {
  // A Gaussian field with covariance min(s, t) has the same law as Brownian
  // motion; compare second moments at two design points.
  const Grid grid = uniform_grid({8});
  SimulationModel model;
  model.mean = [](const Eigen::VectorXd&) { return 0.0; };
  model.process = ProcessKind::GaussianCovariance;
  model.covariance = [](const Eigen::VectorXd& s, const Eigen::VectorXd& t) {
    return std::min(s[0], t[0]);
  };
  model.sigma = 0.0;
  const ProcessSampler sampler(model, grid);
  Rng rng(141);
  double var_mid = 0.0;
  double cov_ends = 0.0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(r));
    const Eigen::VectorXd path = sampler.sample_path(stream);
    var_mid += path[3] * path[3];
    cov_ends += path[0] * path[7];
  }
  CHECK(var_mid / reps == doctest::Approx(grid.axis(0)[3]).epsilon(0.05));
  CHECK(cov_ends / reps == doctest::Approx(grid.axis(0)[0]).epsilon(0.05));

  // Brownian paths in d = 2 are rejected with guidance.
  SimulationModel bm2;
  bm2.mean = [](const Eigen::VectorXd&) { return 0.0; };
  bm2.process = ProcessKind::BrownianMotion;
  const Grid grid2 = uniform_grid({4, 4});
  CHECK_THROWS_AS(ProcessSampler(bm2, grid2), std::invalid_argument);
}

TEST_CASE("replication reports are deterministic and thread-invariant") {
  const Grid grid = uniform_grid({60});
  const SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 1.0);
  EstimatorConfig config;
  config.degree = 2;
  config.h = 0.12;
  const Eigen::MatrixXd points = uniform_eval_points(1, 101);

  const ReplicationReport a =
      run_replications(model, 100, grid, config, points, 24, Rng(987));
  const ReplicationReport b =
      run_replications(model, 100, grid, config, points, 24, Rng(987));
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t r = 0; r < a.records.size(); ++r) {
    CHECK(a.records[r].total == b.records[r].total);
    CHECK(a.records[r].noise == b.records[r].noise);
    CHECK(a.records[r].process == b.records[r].process);
  }

  setenv("FDAMEAN_THREADS", "3", 1);
  const ReplicationReport c =
      run_replications(model, 100, grid, config, points, 24, Rng(987));
  unsetenv("FDAMEAN_THREADS");
  for (std::size_t r = 0; r < a.records.size(); ++r) {
    CHECK(a.records[r].total == c.records[r].total);
  }
}

TEST_CASE("zero noise and no process on a polynomial mean gives zero error") {
  const Grid grid = uniform_grid({60});
  SimulationModel model;
  model.mean = [](const Eigen::VectorXd& x) { return 1.0 - 2.0 * x[0]; };
  model.process = ProcessKind::None;
  model.sigma = 0.0;
  EstimatorConfig config;
  config.degree = 1;
  config.h = 0.15;
  const ReplicationReport report = run_replications(
      model, 50, grid, config, uniform_eval_points(1, 201), 5, Rng(5));
  CHECK(report.failures == 0);
  CHECK(report.total.mean < 1e-8);
}

TEST_CASE("records satisfy the decomposition triangle inequality") {
  const Grid grid = uniform_grid({80});
  const SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 0.7);
  EstimatorConfig config;
  config.degree = 2;
  config.h = 0.1;
  const ReplicationReport report = run_replications(
      model, 200, grid, config, uniform_eval_points(1, 201), 50, Rng(31));
  REQUIRE(report.failures == 0);
  for (const auto& record : report.records) {
    CHECK(record.total <= record.bias + record.noise + record.process + 1e-12);
  }
}

TEST_CASE("doubling the replication count shrinks the standard error") {
  const Grid grid = uniform_grid({60});
  const SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 1.0);
  EstimatorConfig config;
  config.degree = 2;
  config.h = 0.12;
  const Eigen::MatrixXd points = uniform_eval_points(1, 101);

  // Standard error of the Monte-Carlo mean from two independent runs, one
  // with twice the replications of the other.
  const auto standard_error = [&](Eigen::Index reps, std::uint64_t seed) {
    const ReplicationReport report =
        run_replications(model, 100, grid, config, points, reps, Rng(seed));
    REQUIRE(report.failures == 0);
    return report.total.sd / std::sqrt(static_cast<double>(reps));
  };
  const double ratio = standard_error(1600, 56) / standard_error(800, 55);
  CHECK(ratio > (1.0 / std::sqrt(2.0)) * 0.8);
  CHECK(ratio < (1.0 / std::sqrt(2.0)) * 1.2);
}

TEST_CASE("interpolation loses to the tuned degree-2 local polynomial") {
  const Grid grid = uniform_grid({400});
  const SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 1.0);
  const Eigen::MatrixXd points = uniform_eval_points(1, 501);
  const Rng rng(919);

  EstimatorConfig locpol;
  locpol.degree = 2;
  locpol.h = 0.13;  // near the tuned value for n = 600, p = 400
  const double locpol_error =
      run_replications(model, 600, grid, locpol, points, 40, rng).total.mean;

  EstimatorConfig interp;
  interp.kind = EstimatorKind::Interpolation;
  const double interp_error =
      run_replications(model, 600, grid, interp, points, 40, rng).total.mean;

  CHECK(interp_error > locpol_error);
}

TEST_CASE("bandwidth error curve is U-shaped and the minimum is interior") {
  const Grid grid = uniform_grid({115});
  const SimulationModel model = mu0_model(ProcessKind::BrownianMotion, 1.0);
  EstimatorConfig config;
  config.degree = 2;
  const BandwidthGrid h_grid = default_bandwidth_grid(115, 0.02);
  const Rng rng(77);
  const GridSearchResult result = grid_search_supnorm(
      model, 600, grid, config, h_grid, 60, uniform_eval_points(1, 301), rng);
  CHECK(result.best_index > 0);
  CHECK(result.best_index < result.h_values.size() - 1);

  // Fixed seed: the search is reproducible.
  const GridSearchResult again = grid_search_supnorm(
      model, 600, grid, config, h_grid, 60, uniform_eval_points(1, 301), rng);
  CHECK(again.best_h == result.best_h);
}

TEST_CASE("rate experiment returns one row per configuration") {
  SimulationModel model;
  model.mean = [](const Eigen::VectorXd& x) {
    return std::sin(2.0 * std::numbers::pi * x[0]);
  };
  model.process = ProcessKind::None;
  model.sigma = 1.0;
  EstimatorConfig config;
  config.degree = 1;
  const auto rule = [](Eigen::Index) {
    return Eigen::VectorXd::Constant(1, 0.15).eval();
  };
  const std::vector<RateExperimentRow> rows = rate_experiment(
      model, {{200, {40}}, {400, {80}}}, rule, config, 201, 30, Rng(9));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 200);
  CHECK(rows[1].p[0] == 80);
  CHECK(rows[0].best_h == doctest::Approx(0.15));
  CHECK(std::isfinite(rows[0].best_error));
  // More data, same bandwidth: the averaged-noise contribution shrinks.
  CHECK(rows[1].best_error < rows[0].best_error * 1.5);
}
