#pragma once

namespace sonde {

/// Dirichlet eigenbasis of the Laplacian on an interval.
///
/// Eigenvalues are stored for -Laplace, hence positive, even where physics
/// texts would write mu_k = -k^2. For the default domain [0, pi] in one
/// dimension the basis is h_k(x) = sqrt(2/pi) sin(kx) with lambda_k = k^2,
/// orthonormal in L2. For d > 1 only the Weyl exponent lambda_k ~ k^(2/d)
/// is available, which is enough for condition checking but not for exact
/// simulation.
struct SpectralBasis {
  double length = 3.14159265358979323846;  // spatial domain [0, L]
  int dimension = 1;

  bool has_exact_eigenvalues() const { return dimension == 1; }

  /// lambda_k, exact for d == 1; throws for d > 1.
  double eigenvalue(int k) const;

  /// Exponent in lambda_k ~ k^(2/d).
  double eigenvalue_exponent() const { return 2.0 / static_cast<double>(dimension); }

  /// h_k(x); only defined for d == 1.
  double eigenfunction(int k, double x) const;
};

}  // namespace sonde
