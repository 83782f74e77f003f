#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sonde/montecarlo.hpp"
#include "sonde/rng.hpp"
#include "sonde/stats.hpp"

using namespace sonde;

namespace {

CampaignConfig small_additive_campaign(int replications, int workers) {
  CampaignConfig cfg;
  cfg.model = example_additive_model();
  cfg.model.modes = 20;
  cfg.replications = replications;
  cfg.sweep = {5, 20};
  cfg.estimators = {"sigma_fourier"};
  cfg.seed = 424242;
  cfg.workers = workers;
  return cfg;
}

}  // namespace

TEST_CASE("campaign summaries are identical for any worker count") {
  const CampaignSummary one = run_campaign(small_additive_campaign(64, 1));
  const CampaignSummary four = run_campaign(small_additive_campaign(64, 4));
  REQUIRE(one.tracks.size() == four.tracks.size());
  for (std::size_t i = 0; i < one.tracks.size(); ++i) {
    CHECK(one.tracks[i].name == four.tracks[i].name);
    CHECK(one.tracks[i].estimates == four.tracks[i].estimates);
    CHECK(one.tracks[i].normalized_errors == four.tracks[i].normalized_errors);
    CHECK(one.tracks[i].sample_mean == four.tracks[i].sample_mean);
    CHECK(one.tracks[i].ks == four.tracks[i].ks);
  }
}

TEST_CASE("single-replication campaigns report the estimate without a spread") {
  const CampaignSummary summary = run_campaign(small_additive_campaign(1, 1));
  for (const auto& track : summary.tracks) {
    CHECK_FALSE(std::isnan(track.sample_mean));
    CHECK(std::isnan(track.sample_sd));
    CHECK(std::isnan(track.ks));
    CHECK(track.normalized_errors.size() == 1);
  }
}

TEST_CASE("normalized error vectors always have one slot per replication") {
  const CampaignSummary summary = run_campaign(small_additive_campaign(37, 2));
  for (const auto& track : summary.tracks)
    CHECK(track.normalized_errors.size() == 37);
}

TEST_CASE("shell campaign matches the Fisher rate across the sweep") {
  CampaignConfig cfg;
  cfg.model = example_shell_model();
  cfg.replications = 300;
  cfg.sweep = {10, 20, 40, 60};
  cfg.estimators = {"mle"};
  cfg.seed = 5050;
  cfg.workers = 2;
  const CampaignSummary summary = run_campaign(cfg);

  // log-log regression of sample sd against the theoretical rate
  std::vector<double> lx, ly;
  for (int n : cfg.sweep) {
    const auto* track = summary.find("theta_mle", n);
    REQUIRE(track != nullptr);
    lx.push_back(std::log(track->theoretical_sd));
    ly.push_back(std::log(track->sample_sd));
  }
  const double mx = stats::sample_mean(lx);
  const double my = stats::sample_mean(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  CHECK(std::fabs(slope - 1.0) < 0.1);

  // sample mean drift toward the truth between the sweep endpoints
  const auto* first = summary.find("theta_mle", 10);
  const auto* last = summary.find("theta_mle", 60);
  const double m = static_cast<double>(cfg.replications);
  const double band = 3.0 * (first->sample_sd + last->sample_sd) / std::sqrt(m);
  CHECK(std::fabs(last->sample_mean - cfg.model.theta0) <=
        std::fabs(first->sample_mean - cfg.model.theta0) + band);
}

TEST_CASE("campaigns refuse irregular models unless forced") {
  CampaignConfig cfg;
  cfg.model.noise = NoiseType::shell;
  cfg.model.mu = CoefficientFamily::constant(1.0);
  cfg.model.nu = CoefficientFamily::power(1.0, 4.0);
  cfg.model.q = CoefficientFamily::power(1.0, 1.0);
  cfg.model.p = CoefficientFamily::zero_family();
  cfg.model.theta0 = 1.0;
  cfg.model.sigma0 = 1.0;
  cfg.model.box = ParameterBox{0.5, 2.0, 0.5, 2.0};
  cfg.model.initial = InitialCondition::constant(1.0);
  cfg.model.modes = 12;
  cfg.replications = 10;
  cfg.sweep = {12};
  cfg.estimators = {"mle"};
  cfg.seed = 2;
  CHECK_THROWS_AS(run_campaign(cfg), ConditionGateError);
  cfg.force = true;
  CHECK_NOTHROW(run_campaign(cfg));
}

TEST_CASE("campaigns fail loudly when estimators keep failing") {
  CampaignConfig cfg;
  cfg.model = example_shell_model();
  cfg.model.modes = 2;  // one informative mode: the joint MLE cannot run
  cfg.replications = 20;
  cfg.sweep = {2};
  cfg.estimators = {"mle"};
  cfg.seed = 3;
  cfg.force = true;
  CHECK_THROWS_AS(run_campaign(cfg), CampaignError);
}

TEST_CASE("campaign config validation") {
  CampaignConfig cfg = small_additive_campaign(10, 1);
  cfg.sweep = {20, 5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sweep = {5, 40};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sweep = {5, 20};
  cfg.estimators = {"mle"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.estimators = {};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("normality diagnostics on synthetic normal and constant samples") {
  std::vector<double> normal_sample;
  for (std::uint32_t k = 1; k <= 2000; ++k)
    normal_sample.push_back(rng::standard_normal(9090, 0, k));
  const NormalityDiagnostics diag = normality_diagnostics(normal_sample);
  CHECK(diag.ks < stats::ks_critical_1pct(normal_sample.size()));
  CHECK(diag.qq.size() == 99);
  CHECK(diag.qq.front().level == doctest::Approx(0.01));
  CHECK(diag.qq.back().level == doctest::Approx(0.99));
  for (std::size_t i = 1; i < diag.qq.size(); ++i)
    CHECK(diag.qq[i].empirical >= diag.qq[i - 1].empirical);

  CHECK_THROWS_AS(normality_diagnostics({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("KS meta-trial against the 1% critical value") {
  int passes = 0;
  for (std::uint32_t trial = 0; trial < 100; ++trial) {
    std::vector<double> sample;
    sample.reserve(2000);
    for (std::uint32_t k = 1; k <= 2000; ++k)
      sample.push_back(rng::standard_normal(123123, trial, k));
    if (stats::ks_statistic_normal(sample) < stats::ks_critical_1pct(sample.size())) ++passes;
  }
  CHECK(passes >= 96);
}
