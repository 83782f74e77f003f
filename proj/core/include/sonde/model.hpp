#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sonde/basis.hpp"
#include "sonde/coefficients.hpp"

namespace sonde {

enum class NoiseType { shell, additive };

std::string to_string(NoiseType t);

/// Parameter region Theta, a box inside R x (0, inf).
struct ParameterBox {
  double theta_min = -10.0;
  double theta_max = 10.0;
  double sigma_min = 1e-3;
  double sigma_max = 10.0;

  void validate() const;
  bool contains(double theta, double sigma) const;
};

/// Initial Fourier coefficients u_k(0).
struct InitialCondition {
  enum class Kind {
    zero,
    constant,   // u_k(0) = value for all k
    parabola,   // sine coefficients of x(L - x) on [0, L]
    explicit_list,
  };

  Kind kind = Kind::zero;
  double value = 0.0;
  std::vector<double> values;

  static InitialCondition zero() { return {}; }
  static InitialCondition constant(double v);
  static InitialCondition parabola();
  static InitialCondition explicit_list(std::vector<double> v);

  double coefficient(int k, const SpectralBasis& basis) const;
  std::string describe() const;
};

/// Full description of one equation instance, either the multiplicative
/// shell model or the additive model. Immutable after validate(); safe to
/// share across threads.
struct ModelSpec {
  NoiseType noise = NoiseType::shell;

  CoefficientFamily mu;  // drift eigenvalues of A
  CoefficientFamily nu;  // drift eigenvalues of A0 (zero family for additive)
  CoefficientFamily q;   // noise amplitudes, strictly positive
  CoefficientFamily p;   // noise offsets, nonnegative (zero family for additive)

  ParameterBox box;
  double theta0 = 1.0;  // true drift parameter used for simulation
  double sigma0 = 1.0;  // true noise parameter, > 0

  InitialCondition initial;
  double horizon = 1.0;  // T
  double dt = 0.01;      // default output grid spacing
  int modes = 1;         // N

  SpectralBasis basis;

  double vartheta0() const { return sigma0 * sigma0; }

  double mu_k(int k) const { return mu.eval(k); }
  double nu_k(int k) const { return nu.eval(k); }
  double q_k(int k) const { return q.eval(k); }
  double p_k(int k) const { return p.eval(k); }

  /// theta0 * mu_k + nu_k
  double drift(int k) const { return theta0 * mu_k(k) + nu_k(k); }
  /// sigma0 * q_k + p_k
  double noise_scale(int k) const { return sigma0 * q_k(k) + p_k(k); }

  double initial_coefficient(int k) const { return initial.coefficient(k, basis); }

  /// Modes with u_k(0) == 0; their trajectories are identically zero and
  /// carry no information (relevant for shell inference).
  std::vector<int> dead_modes() const;

  /// Checks field invariants. Throws std::invalid_argument with a
  /// description of the first violation.
  void validate() const;

  /// Time grid 0, dt, 2dt, ..., horizon.
  std::vector<double> default_time_grid() const;
};

/// Model built from fractional powers of the Dirichlet Laplacian:
/// mu_k = lambda_k^beta and, for the shell model, nu_k = lambda_k^beta0.
/// Exact per-mode values for d == 1; for d > 1 only the exponent rule
/// mu_k ~ k^(2 beta / d) is represented, so such models can be analyzed
/// but not simulated.
ModelSpec fractional_laplacian_model(NoiseType noise, double beta,
                                     std::optional<double> beta0, int dimension,
                                     CoefficientFamily q, CoefficientFamily p);

/// The two study configurations used throughout the tests and docs.
ModelSpec example_shell_model();     // theta0=0.5, sigma0=0.6, q=p=k, N=60
ModelSpec example_additive_model();  // theta0=0.1, sigma0=0.1, q=1, N=60

}  // namespace sonde
