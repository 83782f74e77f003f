#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "sonde/rng.hpp"
#include "sonde/simulate.hpp"
#include "sonde/stats.hpp"

using namespace sonde;

namespace {

ModelSpec single_mode_additive(double theta, double sigma) {
  ModelSpec model;
  model.noise = NoiseType::additive;
  model.mu = CoefficientFamily::constant(1.0);
  model.nu = CoefficientFamily::zero_family();
  model.q = CoefficientFamily::constant(1.0);
  model.p = CoefficientFamily::zero_family();
  model.theta0 = theta;
  model.sigma0 = sigma;
  model.box = ParameterBox{theta / 10.0, theta * 10.0, sigma / 10.0, sigma * 10.0};
  model.initial = InitialCondition::zero();
  model.modes = 1;
  model.horizon = 1.0;
  model.validate();
  return model;
}

}  // namespace

TEST_CASE("shell trajectories follow the closed form exactly") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 2024, 0);

  CHECK(path.grid_size() == 101);
  // values[k][0] = u_k(0) exactly
  for (int k = 1; k <= model.modes; ++k)
    CHECK(path.value(k, 0) == model.initial_coefficient(k));

  // drift of mode 1 under the study parameters: 0.5 * 1 + 1
  CHECK(model.drift(1) == doctest::Approx(1.5));
  // split the exponent into drift and noise parts at t = 1
  const double t = path.times.back();
  const double lr = path.log_ratio_at(1, path.grid_size() - 1);
  const double noise_part = model.noise_scale(1) * path.xi[0] * t;
  CHECK(lr - noise_part == doctest::Approx(-1.5 * t).epsilon(1e-12));
  CHECK(path.value(1, path.grid_size() - 1) ==
        doctest::Approx(model.initial_coefficient(1) * std::exp(lr)));
}

TEST_CASE("shell log-growth is constant over the grid") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 77, 3);
  for (int k = 1; k <= model.modes; k += 7) {
    if (model.initial_coefficient(k) == 0.0) continue;
    const double y = path.log_ratio_at(k, 1) / path.times[1];
    for (std::size_t j = 2; j < path.grid_size(); j += 13) {
      const double yj = path.log_ratio_at(k, j) / path.times[j];
      CHECK(std::fabs(yj - y) <= 1e-13 * std::max(1.0, std::fabs(y)));
    }
  }
}

TEST_CASE("dead shell modes stay exactly zero") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 5, 0);
  for (std::size_t j = 0; j < path.grid_size(); ++j) CHECK(path.value(2, j) == 0.0);
  CHECK(std::isnan(path.log_ratio_at(2, 1)));
}

TEST_CASE("shell second moment matches the exponential closed form") {
  // E u^2(t) = u0^2 exp(-2 t (theta mu + nu) + 2 (sigma q + p)^2 t^2) for a
  // single mode, checked against a Monte Carlo average
  ModelSpec model;
  model.noise = NoiseType::shell;
  model.mu = CoefficientFamily::constant(1.0);
  model.nu = CoefficientFamily::constant(0.2);
  model.q = CoefficientFamily::constant(0.5);
  model.p = CoefficientFamily::constant(0.1);
  model.theta0 = 0.8;
  model.sigma0 = 0.4;
  model.box = ParameterBox{0.1, 2.0, 0.1, 2.0};
  model.initial = InitialCondition::constant(1.3);
  model.modes = 1;
  model.horizon = 1.0;
  model.dt = 0.5;
  model.validate();

  const double t = 1.0;
  const double drift = model.drift(1);
  const double w = model.noise_scale(1);
  const double closed_form = 1.3 * 1.3 * std::exp(-2.0 * t * drift + 2.0 * w * w * t * t);

  const int reps = 100000;
  std::vector<double> squares;
  squares.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    const FourierPath path = simulate(model, 31337, static_cast<std::uint32_t>(r));
    const double u = path.value(1, path.grid_size() - 1);
    squares.push_back(u * u);
  }
  const auto m = stats::moments(squares);
  const double stderr_mean = m.sd / std::sqrt(static_cast<double>(reps));
  CHECK(std::fabs(m.mean - closed_form) <= 3.0 * stderr_mean);
}

TEST_CASE("normalized shell statistics are standard normal") {
  const ModelSpec model = example_shell_model();
  std::vector<double> pulls;
  for (std::uint32_t r = 0; r < 340; ++r) {
    const FourierPath path = simulate(model, 808, r);
    for (int k = 1; k <= model.modes; k += 2) {  // odd modes are informative
      const double y = path.log_ratio_at(k, 1) / path.times[1];
      pulls.push_back((y + model.drift(k)) / model.noise_scale(k));
    }
  }
  REQUIRE(pulls.size() >= 10000);
  CHECK(stats::ks_statistic_normal(pulls) < stats::ks_critical_1pct(pulls.size()));
}

TEST_CASE("additive solution matches direct substitution") {
  const ModelSpec model = single_mode_additive(0.1, 0.1);
  const FourierPath path = simulate(model, 11, 0);
  const double xi = path.xi[0];
  const std::size_t j = path.grid_size() - 1;  // t = 1
  CHECK(path.value(1, j) == doctest::Approx(-std::expm1(-0.1) * xi).epsilon(1e-14));
  CHECK(-std::expm1(-0.1) == doctest::Approx(0.0951625819640404).epsilon(1e-12));
}

TEST_CASE("additive solution reaches its stationary level") {
  ModelSpec model = single_mode_additive(1.0, 0.7);
  model.horizon = 1000.0;
  model.dt = 250.0;
  const FourierPath path = simulate(model, 21, 0);
  const double limit = model.sigma0 * path.xi[0];  // sigma q xi / (theta mu)
  const double u = path.value(1, path.grid_size() - 1);
  CHECK(u == doctest::Approx(limit).epsilon(1e-12));
}

TEST_CASE("additive model rejects vanishing drift") {
  ModelSpec model = single_mode_additive(0.1, 0.1);
  model.theta0 = 0.0;
  CHECK_THROWS_AS(simulate(model, 0, 0), std::invalid_argument);
}

TEST_CASE("time grids must be increasing and inside the horizon") {
  const ModelSpec model = example_additive_model();
  CHECK_THROWS_AS(simulate_additive(model, {0.0, 0.5, 0.5}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_additive(model, {-0.1, 0.5}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_additive(model, {0.0, 2.0}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_additive(model, {}, 1, 0), std::invalid_argument);
}

TEST_CASE("field with zeroed noise vanishes identically") {
  const ModelSpec model = example_additive_model();
  FourierPath path = simulate(model, 4, 0);
  path.xi.assign(path.xi.size(), 0.0);
  FieldRequest request;
  request.time = 0.2;
  request.truncation = 40;  // stays within the zeroed modes
  request.resolution = 0.05;
  const FieldSample field = reconstruct_field(path, request);
  for (double v : field.u) CHECK(v == 0.0);
  for (double v : field.ux) CHECK(v == 0.0);
}

TEST_CASE("single-term field matches the one-mode series") {
  ModelSpec model = single_mode_additive(0.1, 0.1);
  FourierPath path = simulate(model, 500, 0);
  path.xi[0] = 1.0;
  FieldRequest request;
  request.time = 0.7;
  request.truncation = 1;
  request.resolution = 0.5;
  request.x_min = 0.0;
  request.x_max = 1.0;
  const FieldSample field = reconstruct_field(path, request);
  const double amp = std::sqrt(2.0 / std::numbers::pi) * (0.1 / 0.1) * -std::expm1(-0.1 * 0.7);
  CHECK(field.ux[0] == doctest::Approx(amp).epsilon(1e-13));  // cos(0) = 1
  CHECK(field.u[0] == doctest::Approx(0.0));
  CHECK(field.tail_bound == doctest::Approx(1.0));
}

TEST_CASE("field satisfies the Dirichlet boundary at truncation level") {
  const ModelSpec model = example_additive_model();
  const FourierPath path = simulate(model, 6, 0);
  FieldRequest request;
  request.time = 0.2;
  request.truncation = 2000;
  request.resolution = std::numbers::pi / 2.0;
  const FieldSample field = reconstruct_field(path, request);
  CHECK(field.x.size() == 3);
  CHECK(field.u.front() == 0.0);                  // sin(0) exactly
  CHECK(std::fabs(field.u.back()) < 1e-8);        // sin(k pi) up to rounding
}

TEST_CASE("field extension draws the same stream as longer paths") {
  ModelSpec model = example_additive_model();
  const FourierPath path = simulate(model, 900, 2);

  ModelSpec wide = model;
  wide.modes = 200;
  const FourierPath long_path = simulate(wide, 900, 2);

  FieldRequest request;
  request.time = 0.3;
  request.truncation = 200;
  request.resolution = 0.7;
  const FieldSample from_short = reconstruct_field(path, request);
  const FieldSample from_long = reconstruct_field(long_path, request);
  for (std::size_t j = 0; j < from_short.x.size(); ++j) {
    CHECK(from_short.ux[j] == doctest::Approx(from_long.ux[j]).epsilon(1e-13));
  }
  // earlier modes unchanged by the extension
  for (int k = 1; k <= model.modes; ++k)
    CHECK(path.xi[static_cast<std::size_t>(k - 1)] ==
          long_path.xi[static_cast<std::size_t>(k - 1)]);
}

TEST_CASE("identical seeds reproduce identical paths bit for bit") {
  const ModelSpec model = example_shell_model();
  const FourierPath a = simulate(model, 123456789, 5);
  const FourierPath b = simulate(model, 123456789, 5);
  CHECK(a.values == b.values);
  CHECK(a.xi == b.xi);
  const FourierPath c = simulate(model, 123456790, 5);
  CHECK(a.xi != c.xi);
}

TEST_CASE("field reconstruction rejects unsupported inputs") {
  const ModelSpec shell = example_shell_model();
  const FourierPath shell_path = simulate(shell, 1, 0);
  FieldRequest request;
  CHECK_THROWS_AS(reconstruct_field(shell_path, request), std::invalid_argument);

  ModelSpec nonzero = example_additive_model();
  nonzero.initial = InitialCondition::constant(1.0);
  const FourierPath nonzero_path = simulate(nonzero, 1, 0);
  CHECK_THROWS_AS(reconstruct_field(nonzero_path, request), std::invalid_argument);
}
