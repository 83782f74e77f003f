#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sonde/quadrature.hpp"

using namespace sonde;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto rule = quadrature::gauss_legendre(8, 0.0, 2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    acc += rule.weights[i] * (std::pow(x, 5) - 2.0 * std::pow(x, 3) + 1.0);
  }
  // exact value: 2^6/6 - 2*2^4/4 + 2
  CHECK(acc == doctest::Approx(64.0 / 6.0 - 8.0 + 2.0).epsilon(1e-13));
}

TEST_CASE("gauss-legendre 128 nodes handle oscillatory integrands") {
  const auto rule = quadrature::gauss_legendre(128, 0.0, std::numbers::pi);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * std::sin(rule.nodes[i]);
  CHECK(acc == doctest::Approx(2.0).epsilon(1e-13));
  double total = 0.0;
  for (double w : rule.weights) total += w;
  CHECK(total == doctest::Approx(std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("adaptive simpson reaches the requested tolerance") {
  const double v =
      quadrature::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi,
                                   1e-10);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
  const double w = quadrature::adaptive_simpson([](double x) { return std::exp(-x * x); }, -6.0,
                                                6.0, 1e-11);
  CHECK(w == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-9));
}
