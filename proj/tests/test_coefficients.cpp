#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sonde/coefficients.hpp"
#include "sonde/rng.hpp"

using namespace sonde;

TEST_CASE("family evaluation") {
  CHECK(CoefficientFamily::power(1.0, 1.0).eval(7) == doctest::Approx(7.0));
  // lambda_k = k^2 for the default basis
  CHECK(CoefficientFamily::power(1.0, 2.0).eval(3) == doctest::Approx(9.0));
  const double expected = std::pow(4.0, 0.25) * std::sqrt(std::log(5.0));
  CHECK(CoefficientFamily::power_log(1.0, 0.25, 0.5).eval(4) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(1.7941).epsilon(1e-4));
  CHECK(CoefficientFamily::exponential_decay(2.0).eval(3) == doctest::Approx(2.0 * std::exp(-3.0)));
  CHECK(CoefficientFamily::zero_family().eval(11) == 0.0);
}

TEST_CASE("explicit families are range checked") {
  const auto fam = CoefficientFamily::explicit_list({1.0, 4.0, 9.0});
  CHECK(fam.eval(2) == doctest::Approx(4.0));
  CHECK(fam.max_index() == 3);
  CHECK_THROWS_AS(fam.eval(4), std::out_of_range);
  CHECK_THROWS_AS(fam.eval(0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientFamily::explicit_list({}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientFamily::power(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("power families with positive exponent are strictly increasing") {
  for (int trial = 0; trial < 30; ++trial) {
    const double c = 0.1 + 3.0 * rng::uniform(5150, 0, static_cast<std::uint32_t>(trial), 0);
    const double r = 0.05 + 2.5 * rng::uniform(5150, 0, static_cast<std::uint32_t>(trial), 1);
    const auto fam = CoefficientFamily::power(c, r);
    for (int k = 1; k < 200; ++k) CHECK(fam.eval(k + 1) > fam.eval(k));
  }
}

TEST_CASE("asymptotic exponents match evaluated growth") {
  const auto fam = CoefficientFamily::power_log(2.0, 1.5, -0.5);
  const Growth g = fam.growth();
  CHECK(g.power == doctest::Approx(1.5));
  CHECK(g.log_power == doctest::Approx(-0.5));
  // ratio check at large k against the growth form
  const double k = 1e6;
  const double predicted = g.scale * std::pow(k, g.power) * std::pow(std::log1p(k), g.log_power);
  CHECK(fam.eval(1000000) == doctest::Approx(predicted).epsilon(1e-12));
}

TEST_CASE("growth algebra combines orders lexicographically") {
  const Growth k1 = CoefficientFamily::power(1.0, 1.0).growth();
  const Growth k2 = CoefficientFamily::power(3.0, 2.0).growth();
  const Growth sum = Growth::sum(k1, k2);
  CHECK(sum.power == doctest::Approx(2.0));
  CHECK(sum.scale == doctest::Approx(3.0));

  const Growth same = Growth::sum(k1, CoefficientFamily::power(2.0, 1.0).growth());
  CHECK(same.power == doctest::Approx(1.0));
  CHECK(same.scale == doctest::Approx(3.0));

  const Growth ratio = k2 / k1;
  CHECK(ratio.power == doctest::Approx(1.0));
  CHECK(ratio.scale == doctest::Approx(3.0));

  const Growth decay = CoefficientFamily::exponential_decay(1.0).growth();
  CHECK(Growth::sum(decay, k1).power == doctest::Approx(1.0));
  CHECK((k1 / decay).exp_rate == doctest::Approx(1.0));  // exponential growth
}

TEST_CASE("series divergence follows the Bertrand rule") {
  const auto diverges = [](double r, double s) {
    return Growth{0.0, r, s, 1.0, true, false}.series_diverges();
  };
  CHECK(diverges(-0.5, 0.0));
  CHECK_FALSE(diverges(-1.5, 0.0));
  CHECK(diverges(-1.0, 0.0));    // harmonic
  CHECK(diverges(-1.0, -1.0));   // 1/(k ln k)
  CHECK_FALSE(diverges(-1.0, -1.5));
  CHECK(CoefficientFamily::zero_family().growth().series_diverges() == false);
  CHECK(Growth{1.0, -5.0, 0.0, 1.0, true, false}.series_diverges());  // e^k dominates
}

TEST_CASE("limits and boundedness at the flat boundary") {
  CHECK(Growth{0.0, -0.1, 0.0, 5.0, true, false}.limit_is_zero());
  CHECK_FALSE(Growth{0.0, 0.0, 0.0, 5.0, true, false}.limit_is_zero());  // constant
  CHECK(Growth{0.0, 0.0, 0.0, 5.0, true, false}.is_bounded());
  CHECK(Growth{0.0, 0.0, -0.5, 5.0, true, false}.limit_is_zero());
  CHECK_FALSE(Growth{0.0, 0.0, 0.5, 5.0, true, false}.is_bounded());
  CHECK_THROWS_AS(Growth::unknown().limit_is_zero(), std::logic_error);
}
