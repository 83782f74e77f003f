#pragma once

#include <functional>
#include <vector>

namespace sonde::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [a, b], Newton iteration on the
/// Legendre recurrence.
Rule gauss_legendre(int n, double a, double b);

/// Adaptive Simpson integration to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

}  // namespace sonde::quadrature
