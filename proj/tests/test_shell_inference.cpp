#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sonde/rng.hpp"
#include "sonde/shell_inference.hpp"
#include "sonde/simulate.hpp"
#include "sonde/stats.hpp"

using namespace sonde;

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// hand-rolled random test instances, reproducible through the counter stream
struct InstanceGenerator {
  std::uint64_t seed;
  std::uint32_t id = 0;
  std::uint32_t draw = 0;

  explicit InstanceGenerator(std::uint64_t s) : seed(s) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * rng::uniform(seed, 0xABCD, id, ++draw);
  }
  void next() {
    ++id;
    draw = 0;
  }
};

ShellObservations random_instance(InstanceGenerator& gen, bool zero_p, int min_modes = 3,
                                  int max_modes = 12) {
  ShellObservations obs;
  const int n = min_modes + static_cast<int>(gen.uniform(0, max_modes - min_modes + 1));
  obs.requested_modes = n;
  obs.t = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    obs.mu.push_back(std::pow(kk, gen.uniform(0.5, 2.0)));
    obs.nu.push_back(gen.uniform(0.0, 2.0) * kk);
    obs.q.push_back(std::pow(kk, gen.uniform(0.0, 1.0)));
    obs.p.push_back(zero_p ? 0.0 : gen.uniform(0.0, 1.0) * obs.q.back());
    obs.y.push_back(gen.uniform(-3.0, 1.0) - obs.mu.back());
  }
  return obs;
}

ShellObservations classical_normal(const std::vector<double>& y) {
  ShellObservations obs;
  obs.requested_modes = static_cast<int>(y.size());
  obs.t = 1.0;
  for (double v : y) {
    obs.y.push_back(v);
    obs.mu.push_back(1.0);
    obs.nu.push_back(0.0);
    obs.q.push_back(1.0);
    obs.p.push_back(0.0);
  }
  return obs;
}

}  // namespace

TEST_CASE("single standard normal observation at its mean") {
  ShellObservations obs = classical_normal({-0.4});
  // Y + theta mu + nu = 0 at theta = 0.4, unit variance
  CHECK(log_likelihood(obs, 0.4, 1.0) == doctest::Approx(-0.5 * kLog2Pi).epsilon(1e-15));
  CHECK_THROWS_AS(log_likelihood(obs, 0.4, 0.0), std::domain_error);
}

TEST_CASE("analytic gradient matches central finite differences") {
  InstanceGenerator gen{424242};
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial, gen.next()) {
    const ShellObservations obs = random_instance(gen, trial % 2 == 0);
    const double theta = gen.uniform(-1.0, 1.5);
    const double vt = gen.uniform(0.3, 2.5);
    const auto [g_t, g_v] = log_likelihood_gradient(obs, theta, vt);

    const double h = 1e-6;
    const double fd_t =
        (log_likelihood(obs, theta + h, vt) - log_likelihood(obs, theta - h, vt)) / (2.0 * h);
    const double fd_v =
        (log_likelihood(obs, theta, vt + h) - log_likelihood(obs, theta, vt - h)) / (2.0 * h);
    CHECK(g_t == doctest::Approx(fd_t).epsilon(1e-6));
    CHECK(g_v == doctest::Approx(fd_v).epsilon(1e-6));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("analytic hessian matches finite differences of the gradient") {
  InstanceGenerator gen{555};
  for (int trial = 0; trial < 20; ++trial, gen.next()) {
    const ShellObservations obs = random_instance(gen, false);
    const double theta = gen.uniform(-0.5, 1.0);
    const double vt = gen.uniform(0.4, 2.0);
    const auto h = log_likelihood_hessian(obs, theta, vt);
    const double eps = 1e-6;
    const auto [gt_hi, gv_hi] = log_likelihood_gradient(obs, theta + eps, vt);
    const auto [gt_lo, gv_lo] = log_likelihood_gradient(obs, theta - eps, vt);
    const auto [gt_vhi, gv_vhi] = log_likelihood_gradient(obs, theta, vt + eps);
    const auto [gt_vlo, gv_vlo] = log_likelihood_gradient(obs, theta, vt - eps);
    CHECK(h[0] == doctest::Approx((gt_hi - gt_lo) / (2 * eps)).epsilon(1e-5));
    CHECK(h[1] == doctest::Approx((gv_hi - gv_lo) / (2 * eps)).epsilon(1e-5));
    CHECK(h[1] == doctest::Approx((gt_vhi - gt_vlo) / (2 * eps)).epsilon(1e-5));
    CHECK(h[3] == doctest::Approx((gv_vhi - gv_vlo) / (2 * eps)).epsilon(1e-5));
  }
}

TEST_CASE("closed form reduces to mean and variance in the classical case") {
  const std::vector<double> y{0.3, -1.2, 0.7, 2.1, -0.4};
  const ShellObservations obs = classical_normal(y);
  const EstimateReport est = mle_closed_form(obs);

  const double mean = stats::sample_mean(y);
  double biased_var = 0.0;
  for (double v : y) biased_var += (v - mean) * (v - mean);
  biased_var /= static_cast<double>(y.size());

  CHECK(est.theta == doctest::Approx(-mean).epsilon(1e-14));
  CHECK(est.vartheta == doctest::Approx(biased_var).epsilon(1e-14));
  CHECK(est.method == EstimateMethod::closed_form);
}

TEST_CASE("two-mode closed form by hand") {
  ShellObservations obs;
  obs.requested_modes = 2;
  obs.t = 1.0;
  obs.y = {-1.0, -3.0};
  obs.mu = {1.0, 2.0};
  obs.nu = {0.0, 0.0};
  obs.q = {1.0, 1.0};
  obs.p = {0.0, 0.0};
  const EstimateReport est = mle_closed_form(obs);
  CHECK(est.theta == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(est.vartheta == doctest::Approx(0.10).epsilon(1e-13));
}

TEST_CASE("zero-noise data recovers the drift exactly and flags the scale") {
  const ModelSpec model = example_shell_model();
  ShellObservations obs;
  obs.requested_modes = 12;
  obs.t = 1.0;
  for (int k = 1; k <= 12; ++k) {
    obs.mu.push_back(model.mu_k(k));
    obs.nu.push_back(model.nu_k(k));
    obs.q.push_back(model.q_k(k));
    obs.p.push_back(0.0);
    obs.y.push_back(-model.theta0 * model.mu_k(k) - model.nu_k(k));
  }
  const EstimateReport est = mle_closed_form(obs);
  CHECK(est.theta == doctest::Approx(model.theta0).epsilon(1e-13));
  CHECK(est.vartheta == 0.0);
  CHECK(est.degenerate_vartheta);
}

TEST_CASE("closed-form estimator equivariance") {
  InstanceGenerator gen{777};
  for (int trial = 0; trial < 25; ++trial, gen.next()) {
    ShellObservations obs = random_instance(gen, true);
    const EstimateReport base = mle_closed_form(obs);

    // shift: Y -> Y - c mu moves theta by +c and keeps vartheta
    const double c = gen.uniform(-2.0, 2.0);
    ShellObservations shifted = obs;
    for (std::size_t i = 0; i < obs.size(); ++i) shifted.y[i] -= c * obs.mu[i];
    const EstimateReport after_shift = mle_closed_form(shifted);
    CHECK(after_shift.theta == doctest::Approx(base.theta + c).epsilon(1e-11));
    CHECK(after_shift.vartheta == doctest::Approx(base.vartheta).epsilon(1e-10));

    // scale with nu == 0: Y -> sY maps theta -> s theta, vartheta -> s^2 vartheta
    ShellObservations centered = obs;
    centered.nu.assign(centered.nu.size(), 0.0);
    const EstimateReport base0 = mle_closed_form(centered);
    const double s = gen.uniform(0.5, 3.0);
    ShellObservations scaled = centered;
    for (double& v : scaled.y) v *= s;
    const EstimateReport after_scale = mle_closed_form(scaled);
    CHECK(after_scale.theta == doctest::Approx(s * base0.theta).epsilon(1e-11));
    CHECK(after_scale.vartheta == doctest::Approx(s * s * base0.vartheta).epsilon(1e-10));
  }
}

TEST_CASE("gradient vanishes at the closed-form estimate") {
  InstanceGenerator gen{31415};
  for (int trial = 0; trial < 40; ++trial, gen.next()) {
    const ShellObservations obs = random_instance(gen, true);
    const EstimateReport est = mle_closed_form(obs);
    if (est.degenerate_vartheta) continue;
    const auto [g_t, g_v] = log_likelihood_gradient(obs, est.theta, est.vartheta);
    CHECK(std::fabs(g_t) < 1e-9);
    CHECK(std::fabs(g_v) < 1e-9);
  }
}

TEST_CASE("newton agrees with the closed form when p vanishes") {
  InstanceGenerator gen{271828};
  int agreements = 0;
  for (int trial = 0; trial < 200; ++trial, gen.next()) {
    const ShellObservations obs = random_instance(gen, true, 4, 14);
    const EstimateReport closed = mle_closed_form(obs);
    if (closed.degenerate_vartheta) continue;
    const EstimateReport newton = mle_numeric(obs);
    CHECK(newton.converged);
    CHECK(newton.theta == doctest::Approx(closed.theta).epsilon(1e-8));
    CHECK(newton.vartheta == doctest::Approx(closed.vartheta).epsilon(1e-8));
    ++agreements;
  }
  CHECK(agreements >= 195);
}

TEST_CASE("negating the residuals leaves the fitted scale unchanged") {
  InstanceGenerator gen{1618};
  for (int trial = 0; trial < 10; ++trial, gen.next()) {
    const ShellObservations obs = random_instance(gen, false, 5, 10);
    const EstimateReport base = mle_numeric(obs);
    ShellObservations flipped = obs;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const double e = obs.y[i] + base.theta * obs.mu[i] + obs.nu[i];
      flipped.y[i] = -e - base.theta * obs.mu[i] - obs.nu[i];
    }
    const EstimateReport mirrored = mle_numeric(flipped);
    CHECK(mirrored.theta == doctest::Approx(base.theta).epsilon(1e-7));
    CHECK(mirrored.vartheta == doctest::Approx(base.vartheta).epsilon(1e-7));
  }
}

TEST_CASE("newton estimates stay within four standard errors on study data") {
  const ModelSpec model = example_shell_model();
  int covered = 0;
  const int reps = 200;
  for (std::uint32_t r = 0; r < reps; ++r) {
    const FourierPath path = simulate(model, 10101, r);
    const ShellObservations obs = ShellObservations::from_path(path, 60);
    const EstimateReport est = mle_numeric(obs);
    REQUIRE(est.converged);
    const FisherInfo truth_info = fisher_information(obs, model.vartheta0());
    const bool ok_theta = std::fabs(est.theta - model.theta0) < 4.0 * truth_info.se_theta();
    const bool ok_vt = std::fabs(est.vartheta - model.vartheta0()) < 4.0 * truth_info.se_vartheta();
    if (ok_theta && ok_vt) ++covered;
  }
  CHECK(covered >= static_cast<int>(0.95 * reps));
}

TEST_CASE("fisher information closed form and monotonicity") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 3, 0);

  // p == 0: Phi_N = N / (2 vartheta^2)
  ShellObservations flat = ShellObservations::from_path(path, 40);
  flat.p.assign(flat.p.size(), 0.0);
  const double vt = 0.36;
  const FisherInfo info = fisher_information(flat, vt);
  CHECK(info.phi ==
        doctest::Approx(static_cast<double>(flat.size()) / (2.0 * vt * vt)).epsilon(1e-12));
  CHECK(info.phi_sigma == doctest::Approx(4.0 * vt * info.phi).epsilon(1e-13));

  double last_psi = 0.0, last_phi = 0.0;
  for (int n : {10, 20, 40, 60}) {
    const ShellObservations obs = ShellObservations::from_path(path, n);
    const FisherInfo fi = fisher_information(obs, vt);
    CHECK(fi.psi > last_psi);
    CHECK(fi.phi > last_phi);
    last_psi = fi.psi;
    last_phi = fi.phi;
  }
}

TEST_CASE("posterior mean approaches the MLE on study data") {
  const ModelSpec model = example_shell_model();
  double accumulated = 0.0;
  const int reps = 100;
  for (std::uint32_t r = 0; r < reps; ++r) {
    const FourierPath path = simulate(model, 606060, r);
    const ShellObservations obs = ShellObservations::from_path(path, 60);
    const EstimateReport mle = mle_numeric(obs);
    const EstimateReport bayes = bayes_posterior_mean(obs);
    REQUIRE(bayes.converged);
    const FisherInfo info = fisher_information(obs, model.vartheta0());
    accumulated += std::fabs(bayes.theta - mle.theta) * std::sqrt(info.psi);
  }
  CHECK(accumulated / reps < 0.05);
}

TEST_CASE("single-mode posterior mean sits at the symmetric center") {
  ShellObservations obs;
  obs.requested_modes = 1;
  obs.t = 1.0;
  obs.y = {-1.7};
  obs.mu = {2.0};
  obs.nu = {0.3};
  obs.q = {1.0};
  obs.p = {0.0};
  const double center = -(obs.y[0] + obs.nu[0]) / obs.mu[0];

  // flat prior on a box that is symmetric in theta around the center
  const Prior prior = Prior::flat_box(center - 2.0, center + 2.0, 0.2, 3.0);
  const EstimateReport bayes = bayes_posterior_mean(obs, prior);
  CHECK(bayes.theta == doctest::Approx(center).epsilon(1e-8));
}

TEST_CASE("a nearly point-mass prior dominates the posterior") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 12, 0);
  const ShellObservations obs = ShellObservations::from_path(path, 20);
  const double theta_star = 0.9;
  const double vt_star = 0.5;
  const Prior prior = Prior::gaussian(theta_star, 1e-5, vt_star, 1e-5);
  const EstimateReport bayes = bayes_posterior_mean(obs, prior);
  // recovery up to the node spacing of the widened quadrature window
  CHECK(bayes.theta == doctest::Approx(theta_star).epsilon(2e-2));
  CHECK(bayes.vartheta == doctest::Approx(vt_star).epsilon(2e-2));
}

TEST_CASE("local likelihood ratio is exactly one at the origin") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 404, 1);
  const ShellObservations obs = ShellObservations::from_path(path, 30);
  const LanStatistics lan = lan_statistics(obs, model.theta0, model.vartheta0());
  CHECK(lan.z(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(lan.log_z(0.0, -1e9), std::domain_error);
}

TEST_CASE("lan statistics have unit moments under the truth") {
  const ModelSpec model = example_shell_model();
  const int reps = 10000;
  std::vector<double> etas, zetas;
  etas.reserve(reps);
  zetas.reserve(reps);
  double cross = 0.0;
  for (std::uint32_t r = 0; r < reps; ++r) {
    const FourierPath path = simulate(model, 515151, r);
    const ShellObservations obs = ShellObservations::from_path(path, 60);
    const LanStatistics lan = lan_statistics(obs, model.theta0, model.vartheta0());
    etas.push_back(lan.eta);
    zetas.push_back(lan.zeta);
    cross += lan.eta * lan.zeta;
  }
  const auto m_eta = stats::moments(etas);
  const auto m_zeta = stats::moments(zetas);
  const double root_m = std::sqrt(static_cast<double>(reps));
  CHECK(std::fabs(m_eta.mean) < 4.0 / root_m);
  CHECK(std::fabs(m_zeta.mean) < 4.0 * m_zeta.sd / root_m);
  CHECK(std::fabs(m_eta.sd * m_eta.sd - 1.0) < 4.0 * std::sqrt(2.0) / root_m);
  CHECK(std::fabs(m_zeta.sd * m_zeta.sd - 1.0) < 4.0 * std::sqrt(2.0 + 12.0 / 30.0) / root_m);
  CHECK(std::fabs(cross / reps) < 4.0 / root_m);
}

TEST_CASE("lan expansion residual shrinks at large mode counts") {
  // p == 0 variant of the study model
  const auto mean_abs_remainder = [](int modes) {
    ModelSpec model = example_shell_model();
    model.p = CoefficientFamily::zero_family();
    model.modes = modes;
    model.initial = InitialCondition::constant(1.0);
    model.dt = 0.5;
    model.validate();

    const double s = 1.0, tau = 1.0;
    double acc = 0.0;
    const int reps = 100;
    for (std::uint32_t r = 0; r < reps; ++r) {
      const FourierPath path = simulate(model, 616161, r);
      const ShellObservations obs = ShellObservations::from_path(path, modes);
      const LanStatistics lan = lan_statistics(obs, model.theta0, model.vartheta0());
      acc += std::fabs(lan.log_z(s, tau) -
                       (s * lan.eta + tau * lan.zeta - 0.5 * s * s - 0.5 * tau * tau));
    }
    return acc / reps;
  };
  const double at_500 = mean_abs_remainder(500);
  const double at_2000 = mean_abs_remainder(2000);
  CHECK(at_500 < 0.1);
  CHECK(at_2000 < at_500);
  CHECK(at_2000 < 0.06);
}

TEST_CASE("observations drop dark modes and reject non-shell paths") {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 8, 0);
  const ShellObservations obs = ShellObservations::from_path(path, 60);
  CHECK(obs.size() == 30);
  CHECK(obs.dropped_modes == 30);
  CHECK(obs.requested_modes == 60);

  const ModelSpec additive = example_additive_model();
  const FourierPath wrong = simulate(additive, 8, 0);
  CHECK_THROWS_AS(ShellObservations::from_path(wrong, 10), std::invalid_argument);
}
