#include "sonde/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sonde {

double SpectralBasis::eigenvalue(int k) const {
  if (k < 1) throw std::invalid_argument("SpectralBasis::eigenvalue: index must be >= 1");
  if (!has_exact_eigenvalues())
    throw std::logic_error("SpectralBasis::eigenvalue: exact eigenvalues only for d == 1");
  const double w = static_cast<double>(k) * std::numbers::pi / length;
  return w * w;
}

double SpectralBasis::eigenfunction(int k, double x) const {
  if (k < 1) throw std::invalid_argument("SpectralBasis::eigenfunction: index must be >= 1");
  if (dimension != 1)
    throw std::logic_error("SpectralBasis::eigenfunction: only defined for d == 1");
  return std::sqrt(2.0 / length) * std::sin(static_cast<double>(k) * std::numbers::pi * x / length);
}

}  // namespace sonde
