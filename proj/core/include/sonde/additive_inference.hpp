#pragma once

#include <vector>

#include "sonde/simulate.hpp"

namespace sonde {

/// Increments U_k(t) = u_k(t) - u_k(0) of one additive-model mode at the
/// times the drift-recovery rules need. U_k factors as
/// (sigma q_k xi_k / (theta mu_k) - u_k(0)) * (1 - e^(-theta mu_k t)), so
/// ratios of U values at different times are noise-free, which is what makes
/// theta mu_k exactly recoverable.
struct IncrementObservations {
  int mode = 1;
  double t1 = 0.0;
  double t2 = 0.0;
  double u_at_t1 = 0.0;
  double u_at_t2 = 0.0;
  double u_at_gap = 0.0;  // U_k(t2 - t1), used by the three-point rule
  bool has_gap_value = false;

  /// Reads the increments off a simulated path; t1, t2 and t2 - t1 must be
  /// grid times (matched within 1e-9).
  static IncrementObservations from_path(const FourierPath& path, int mode, double t1, double t2);
};

/// F_{a,b}(x) = (1 - e^(-ax)) / (1 - e^(-bx)) for a > b > 0, strictly
/// decreasing from a/b (x -> 0+) down to 1 (x -> infinity).
double increment_ratio_curve(double a, double b, double x);

/// Inverse of F_{a,b} on (1, a/b), safeguarded Newton/bisection to relative
/// tolerance 1e-13.
double invert_increment_ratio(double a, double b, double ratio);

/// theta mu_k from two increments: F^{-1}_{t2,t1}(U_k(t2)/U_k(t1)).
/// Throws std::domain_error when the ratio falls outside the open range of
/// F, which means the data are inconsistent with the model (or theta mu_k
/// is not positive), and when U_k(t1) == 0 (degenerate draw).
double recover_drift_two_point(const IncrementObservations& obs);

/// theta mu_k from three increments, no inversion needed:
/// ln(U_k(t2 - t1) / (U_k(t2) - U_k(t1))) / t1.
double recover_drift_three_point(const IncrementObservations& obs);

/// Relative residual of the defining identity at a recovered value
/// (reported next to each estimate by the CLI).
double two_point_residual(const IncrementObservations& obs, double theta_mu);
double three_point_residual(const IncrementObservations& obs, double theta_mu);

/// Variance MLE from Fourier data at one time point. The statistics
/// X_k = theta mu_k U_k(t) / (q_k S_k(t)) are i.i.d. N(0, sigma^2), and
/// vartheta_hat = (1/N) sum X_k^2 with asymptotic law
/// sqrt(N) (vartheta_hat - sigma^2) -> N(0, 2 sigma^4).
struct VarianceEstimate {
  double vartheta = 0.0;
  double sigma = 0.0;
  double se_vartheta = 0.0;  // sqrt(2/N) * vartheta_hat
  double se_sigma = 0.0;     // sigma_hat / sqrt(2N)
  int modes = 0;
  bool degenerate = false;  // all statistics zero
  std::vector<double> statistics;  // the X_k
};

/// theta_mu[k-1] must hold theta mu_k for k = 1..modes, typically either the
/// exactly recovered values or the known truth; t defaults to the last grid
/// time when NaN is passed.
VarianceEstimate sigma_mle_fourier(const FourierPath& path, double t, int modes,
                                   const std::vector<double>& theta_mu);

/// Spatial samples of u_x(t, .) or u(t, .) on a uniform grid; the quadratic
/// variation below is defined over uniform partitions only.
struct SpatialIncrements {
  std::vector<double> x;
  std::vector<double> values;
  double time = 0.0;
  bool derivative = true;  // true: u_x samples, false: u samples

  /// Restricts a reconstructed field to the window [a, b].
  static SpatialIncrements from_field(const FieldSample& field, bool derivative, double a,
                                      double b);

  void require_uniform_grid() const;
  double window_length() const { return x.back() - x.front(); }
};

struct QvEstimate {
  enum class Target { theta_sq, sigma_sq };
  Target target = Target::theta_sq;
  double estimate = 0.0;
  double se = 0.0;              // sqrt(2) * estimate / sqrt(M)
  double quadratic_sum = 0.0;   // Q (increments) or the scaled second-difference sum D
  int increments = 0;           // M
  bool experimental = false;    // finite-difference variant, consistency conjectured only
  bool degenerate = false;      // zero quadratic sum
};

/// Quadratic-variation estimators from u_x samples:
/// theta_check^2 = sigma^2 (b - a) / Q and sigma_check^2 = theta^2 Q / (b - a).
QvEstimate quad_var_theta(const SpatialIncrements& samples, double sigma_known);
QvEstimate quad_var_sigma(const SpatialIncrements& samples, double theta_known);

/// Finite-difference variants working on u samples through second
/// differences; flagged experimental.
QvEstimate quad_var_theta_fd(const SpatialIncrements& samples, double sigma_known);
QvEstimate quad_var_sigma_fd(const SpatialIncrements& samples, double theta_known);

}  // namespace sonde
