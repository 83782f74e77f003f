#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sonde/model.hpp"
#include "sonde/simulate.hpp"

namespace sonde {

/// Sufficient statistics of the shell experiment: the per-mode log-growth
/// rates Y_k = ln(u_k(t)/u_k(0)) / t together with the known coefficient
/// values. Under the model, (Y_k + theta mu_k + nu_k)/(sigma q_k + p_k) are
/// i.i.d. standard normal.
///
/// Y_k does not depend on the time it is read off at (the trajectory is
/// log-linear); from_path() computes it at the earliest positive grid time
/// and asserts that invariant at the remaining times. Modes with
/// u_k(0) == 0 carry no information and are dropped, with the count kept
/// in dropped_modes; all sums below run over the retained modes.
struct ShellObservations {
  std::vector<double> y;
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> q;
  std::vector<double> p;
  double t = 0.0;           // observation time the Y's were formed at
  int requested_modes = 0;  // N as asked for
  int dropped_modes = 0;

  std::size_t size() const { return y.size(); }
  bool p_is_zero() const;

  /// Statistics from the first `modes` modes of a simulated path
  /// (0 means all modes on the path).
  static ShellObservations from_path(const FourierPath& path, int modes = 0);

  /// Statistics from raw values; families evaluated at k = 1..N.
  static ShellObservations from_values(std::vector<double> y_values, const ModelSpec& model);
};

/// Diagonal Fisher information of (theta, vartheta), plus the
/// sigma-parameterization entry obtained by the chain rule through
/// vartheta = sigma^2.
struct FisherInfo {
  double psi = 0.0;        // sum mu_k^2 / (sqrt(vt) q_k + p_k)^2
  double phi = 0.0;        // (1/2) sum q_k^2 / (vt q_k + sqrt(vt) p_k)^2
  double phi_sigma = 0.0;  // 4 vt phi

  double se_theta() const;
  double se_vartheta() const;
  double se_sigma() const;
};

FisherInfo fisher_information(const ShellObservations& obs, double vartheta);

enum class EstimateMethod { closed_form, newton, bayes };
std::string to_string(EstimateMethod m);

struct EstimateReport {
  EstimateMethod method = EstimateMethod::closed_form;
  double theta = 0.0;
  double vartheta = 0.0;
  double sigma = 0.0;
  double se_theta = 0.0;
  double se_vartheta = 0.0;
  double se_sigma = 0.0;

  bool converged = true;
  bool degenerate_vartheta = false;  // all residuals zero, sigma information infinite
  bool boundary_escape = false;      // the vartheta iterate collapsed toward 0
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string note;
};

/// ln L_N(theta, vartheta); requires vartheta > 0.
double log_likelihood(const ShellObservations& obs, double theta, double vartheta);

/// Analytic gradient of ln L_N in (theta, vartheta).
std::pair<double, double> log_likelihood_gradient(const ShellObservations& obs, double theta,
                                                  double vartheta);

/// Analytic Hessian, row-major [d2/dtheta2, d2/dtheta dvt, ., d2/dvt2].
std::array<double, 4> log_likelihood_hessian(const ShellObservations& obs, double theta,
                                             double vartheta);

/// Joint MLE in closed form; only valid when p == 0.
EstimateReport mle_closed_form(const ShellObservations& obs);

/// Joint MLE by damped Newton iteration on (theta, ln vartheta), started at
/// the closed-form estimate with p treated as zero. Converges when the
/// (theta, vartheta) gradient norm drops below 1e-10, capped at 100 steps.
EstimateReport mle_numeric(const ShellObservations& obs,
                           std::optional<std::pair<double, double>> init = std::nullopt);

/// Prior on (theta, vartheta) with box support.
struct Prior {
  double theta_min = -1e6;
  double theta_max = 1e6;
  double vartheta_min = 0.0;
  double vartheta_max = 1e6;
  std::function<double(double, double)> log_density;  // may be null (flat)

  static Prior flat();
  static Prior flat_box(double theta_min, double theta_max, double vt_min, double vt_max);
  static Prior gaussian(double theta_center, double theta_sd, double vt_center, double vt_sd);
};

struct BayesOptions {
  int nodes = 128;          // tensor-product Gauss-Legendre nodes per axis
  double half_width = 8.0;  // window half-width in standard errors
  int max_widenings = 3;
  double boundary_mass_tol = 1e-6;
};

/// Posterior mean of (theta, vartheta) over a window around the numeric
/// MLE, tensor-product Gauss-Legendre with log-sum-exp stabilization.
/// If more than boundary_mass_tol of the posterior mass sits on the window
/// frame, the window is widened and the quadrature rerun; a report that
/// still fails the check is flagged via note.
EstimateReport bayes_posterior_mean(const ShellObservations& obs, const Prior& prior = Prior::flat(),
                                    const BayesOptions& options = {});

/// The LAN statistics (eta_N, zeta_N) at (theta, vartheta) and the exact
/// local likelihood ratio evaluator
///   Z(s, tau) = L(theta + s/sqrt(Psi), vartheta + tau/sqrt(Phi)) / L(theta, vartheta).
struct LanStatistics {
  double eta = 0.0;
  double zeta = 0.0;
  FisherInfo fisher;
  std::function<double(double, double)> log_z;

  double z(double s, double tau) const;
};

LanStatistics lan_statistics(const ShellObservations& obs, double theta, double vartheta);

}  // namespace sonde
