#include "sonde/shell_inference.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "sonde/quadrature.hpp"

namespace sonde {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_vartheta(double vartheta) {
  if (!(vartheta > 0.0)) throw std::domain_error("shell inference: vartheta must be positive");
}

}  // namespace

bool ShellObservations::p_is_zero() const {
  for (double v : p) {
    if (v != 0.0) return false;
  }
  return true;
}

ShellObservations ShellObservations::from_path(const FourierPath& path, int modes) {
  if (path.model.noise != NoiseType::shell)
    throw std::invalid_argument("ShellObservations: path is not from a shell model");
  if (path.log_ratio.empty())
    throw std::invalid_argument("ShellObservations: path carries no log ratios");
  const int limit = modes == 0 ? path.mode_count() : modes;
  if (limit < 1 || limit > path.mode_count())
    throw std::invalid_argument("ShellObservations: bad mode cutoff");

  const std::size_t j0 = path.first_positive_time_index();
  const double t0 = path.times[j0];

  ShellObservations obs;
  obs.t = t0;
  obs.requested_modes = limit;
  for (int k = 1; k <= limit; ++k) {
    if (path.model.initial_coefficient(k) == 0.0) {
      ++obs.dropped_modes;
      continue;
    }
    const double yk = path.log_ratio_at(k, j0) / t0;
    // log-linearity: the same rate must come out at every other grid time
    const std::size_t j1 = path.grid_size() - 1;
    if (j1 != j0) {
      const double y_end = path.log_ratio_at(k, j1) / path.times[j1];
      const double scale = std::max({1.0, std::fabs(yk), std::fabs(y_end)});
      if (std::fabs(y_end - yk) > 1e-12 * scale)
        throw std::logic_error("ShellObservations: Y_k is not constant over the grid");
    }
    obs.y.push_back(yk);
    obs.mu.push_back(path.model.mu_k(k));
    obs.nu.push_back(path.model.nu_k(k));
    obs.q.push_back(path.model.q_k(k));
    obs.p.push_back(path.model.p_k(k));
  }
  if (obs.y.empty()) throw std::invalid_argument("ShellObservations: every mode is dark");
  return obs;
}

ShellObservations ShellObservations::from_values(std::vector<double> y_values,
                                                 const ModelSpec& model) {
  if (y_values.empty()) throw std::invalid_argument("ShellObservations: no observations");
  ShellObservations obs;
  obs.t = model.horizon;
  obs.requested_modes = static_cast<int>(y_values.size());
  for (int k = 1; k <= obs.requested_modes; ++k) {
    const double yk = y_values[static_cast<std::size_t>(k - 1)];
    if (!std::isfinite(yk)) throw std::invalid_argument("ShellObservations: non-finite Y value");
    obs.y.push_back(yk);
    obs.mu.push_back(model.mu_k(k));
    obs.nu.push_back(model.nu_k(k));
    obs.q.push_back(model.q_k(k));
    obs.p.push_back(model.p_k(k));
  }
  return obs;
}

double FisherInfo::se_theta() const { return 1.0 / std::sqrt(psi); }
double FisherInfo::se_vartheta() const { return 1.0 / std::sqrt(phi); }
double FisherInfo::se_sigma() const { return 1.0 / std::sqrt(phi_sigma); }

FisherInfo fisher_information(const ShellObservations& obs, double vartheta) {
  require_vartheta(vartheta);
  const double root = std::sqrt(vartheta);
  FisherInfo info;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double w = root * obs.q[i] + obs.p[i];
    info.psi += obs.mu[i] * obs.mu[i] / (w * w);
    info.phi += 0.5 * obs.q[i] * obs.q[i] / (vartheta * w * w);
  }
  info.phi_sigma = 4.0 * vartheta * info.phi;
  return info;
}

std::string to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::closed_form:
      return "closed_form";
    case EstimateMethod::newton:
      return "newton";
    case EstimateMethod::bayes:
      return "bayes";
  }
  return "?";
}

double log_likelihood(const ShellObservations& obs, double theta, double vartheta) {
  require_vartheta(vartheta);
  const double root = std::sqrt(vartheta);
  double acc = -0.5 * static_cast<double>(obs.size()) * kLog2Pi;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double w = root * obs.q[i] + obs.p[i];
    const double e = obs.y[i] + theta * obs.mu[i] + obs.nu[i];
    acc -= std::log(w) + 0.5 * e * e / (w * w);
  }
  return acc;
}

std::pair<double, double> log_likelihood_gradient(const ShellObservations& obs, double theta,
                                                  double vartheta) {
  require_vartheta(vartheta);
  const double root = std::sqrt(vartheta);
  double g_theta = 0.0;
  double g_vt = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double w = root * obs.q[i] + obs.p[i];
    const double e = obs.y[i] + theta * obs.mu[i] + obs.nu[i];
    g_theta -= obs.mu[i] * e / (w * w);
    g_vt += obs.q[i] * (e * e - w * w) / (w * w * w);
  }
  g_vt /= 2.0 * root;
  return {g_theta, g_vt};
}

std::array<double, 4> log_likelihood_hessian(const ShellObservations& obs, double theta,
                                             double vartheta) {
  require_vartheta(vartheta);
  const double root = std::sqrt(vartheta);
  double h_tt = 0.0, h_tv = 0.0, h_vv_a = 0.0, h_vv_b = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double w = root * obs.q[i] + obs.p[i];
    const double e = obs.y[i] + theta * obs.mu[i] + obs.nu[i];
    const double w2 = w * w;
    h_tt -= obs.mu[i] * obs.mu[i] / w2;
    h_tv += obs.mu[i] * e * obs.q[i] / (w2 * w);
    h_vv_a += obs.q[i] * (e * e - w2) / (w2 * w);
    h_vv_b += obs.q[i] * obs.q[i] * (w2 - 3.0 * e * e) / (w2 * w2);
  }
  h_tv /= root;
  const double h_vv = -h_vv_a / (4.0 * vartheta * root) + h_vv_b / (4.0 * vartheta);
  return {h_tt, h_tv, h_tv, h_vv};
}

EstimateReport mle_closed_form(const ShellObservations& obs) {
  if (!obs.p_is_zero())
    throw std::invalid_argument("mle_closed_form: requires p == 0 for every mode");
  if (obs.size() == 0) throw std::invalid_argument("mle_closed_form: no observations");

  double numer = 0.0;
  double denom = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double q2 = obs.q[i] * obs.q[i];
    numer += (obs.mu[i] * obs.y[i] + obs.mu[i] * obs.nu[i]) / q2;
    denom += obs.mu[i] * obs.mu[i] / q2;
  }
  EstimateReport report;
  report.method = EstimateMethod::closed_form;
  report.theta = -numer / denom;

  double rss = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double e = obs.y[i] + report.theta * obs.mu[i] + obs.nu[i];
    rss += e * e / (obs.q[i] * obs.q[i]);
  }
  report.vartheta = rss / static_cast<double>(obs.size());
  report.sigma = std::sqrt(report.vartheta);

  if (report.vartheta == 0.0) {
    report.degenerate_vartheta = true;
    report.se_theta = report.se_vartheta = report.se_sigma = kNaN;
    report.note = "all residuals zero; sigma-scale information is infinite";
    return report;
  }
  const FisherInfo info = fisher_information(obs, report.vartheta);
  report.se_theta = info.se_theta();
  report.se_vartheta = info.se_vartheta();
  report.se_sigma = info.se_sigma();
  return report;
}

namespace {

// Profile likelihood pieces in the signed-sigma parameterization
// w_k = sigma q_k + p_k, valid on sigma > -min_k p_k/q_k where every w_k
// stays positive. For p == 0 this is the usual sigma > 0 domain; for p != 0
// the stationary point can sit at a small nonpositive sigma in weakly
// informative samples, where the vartheta > 0 parameterization would push
// the iterate into the boundary instead.
struct SignedSigma {
  const ShellObservations& obs;
  double floor;  // infimum of admissible sigma

  double value(double theta, double s) const {
    double acc = -0.5 * static_cast<double>(obs.size()) * kLog2Pi;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const double w = s * obs.q[i] + obs.p[i];
      const double e = obs.y[i] + theta * obs.mu[i] + obs.nu[i];
      acc -= std::log(w) + 0.5 * e * e / (w * w);
    }
    return acc;
  }

  // gradient and Hessian in (theta, s)
  void derivatives(double theta, double s, double& g_t, double& g_s, double& h_tt, double& h_ts,
                   double& h_ss) const {
    g_t = g_s = h_tt = h_ts = h_ss = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const double w = s * obs.q[i] + obs.p[i];
      const double e = obs.y[i] + theta * obs.mu[i] + obs.nu[i];
      const double w2 = w * w;
      g_t -= obs.mu[i] * e / w2;
      g_s += obs.q[i] * (e * e - w2) / (w2 * w);
      h_tt -= obs.mu[i] * obs.mu[i] / w2;
      h_ts += 2.0 * obs.mu[i] * e * obs.q[i] / (w2 * w);
      h_ss += obs.q[i] * obs.q[i] * (w2 - 3.0 * e * e) / (w2 * w2);
    }
  }
};

}  // namespace

EstimateReport mle_numeric(const ShellObservations& obs,
                           std::optional<std::pair<double, double>> init) {
  if (obs.size() < 2) throw std::invalid_argument("mle_numeric: needs at least two modes");

  double floor = 0.0;
  if (!obs.p_is_zero()) {
    floor = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < obs.size(); ++i) floor = std::max(floor, -obs.p[i] / obs.q[i]);
  }
  const SignedSigma model{obs, floor};

  double theta, sigma;
  if (init.has_value()) {
    theta = init->first;
    require_vartheta(init->second);
    sigma = std::sqrt(init->second);
  } else {
    // closed-form start with p treated as zero
    ShellObservations flat = obs;
    flat.p.assign(flat.p.size(), 0.0);
    const EstimateReport warm = mle_closed_form(flat);
    theta = warm.theta;
    sigma = warm.degenerate_vartheta || warm.vartheta <= 0.0 ? 1.0 : warm.sigma;
  }
  if (!(sigma > floor)) sigma = floor + 1.0;

  EstimateReport report;
  report.method = EstimateMethod::newton;

  // iterate on (theta, ell = ln(sigma - floor)) to keep every w_k positive
  double ell = std::log(sigma - floor);
  const double ell_floor = ell - 60.0;
  double value = model.value(theta, sigma);
  bool stationary = false;
  double g_t = 0.0, g_s = 0.0;

  for (report.iterations = 0; report.iterations < 100; ++report.iterations) {
    double h_tt, h_ts, h_ss;
    model.derivatives(theta, sigma, g_t, g_s, h_tt, h_ts, h_ss);
    report.gradient_norm = std::hypot(g_t, g_s);
    if (report.gradient_norm < 1e-10) break;

    const double gap = sigma - floor;
    const double gl = gap * g_s;
    const double h_tl = gap * h_ts;
    const double h_ll = gap * gap * h_ss + gl;

    double d_t, d_l;
    const double det = h_tt * h_ll - h_tl * h_tl;
    bool newton_ok = det > 0.0 && h_tt < 0.0;  // negative definite
    if (newton_ok) {
      d_t = -(h_ll * g_t - h_tl * gl) / det;
      d_l = -(h_tt * gl - h_tl * g_t) / det;
      if (d_t * g_t + d_l * gl <= 0.0) newton_ok = false;  // not an ascent direction
    }
    if (!newton_ok) {
      const double scale = 1.0 / std::max(1.0, std::hypot(g_t, gl));
      d_t = g_t * scale;
      d_l = gl * scale;
    }

    double step = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      const double theta_try = theta + step * d_t;
      const double ell_try = ell + step * d_l;
      const double value_try = model.value(theta_try, floor + std::exp(ell_try));
      if (value_try > value) {
        theta = theta_try;
        ell = ell_try;
        sigma = floor + std::exp(ell);
        value = value_try;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (ell < ell_floor) {
      report.boundary_escape = true;
      report.note = "scale iterate collapsed toward the admissible boundary";
      break;
    }
    if (!improved) {
      // the objective cannot resolve an increase any more; accept as a
      // stationary point when the proposed step is at rounding scale
      stationary = std::hypot(d_t, d_l) < 1e-7 * (1.0 + std::hypot(theta, ell));
      break;
    }
  }

  {
    double h_tt, h_ts, h_ss;
    model.derivatives(theta, sigma, g_t, g_s, h_tt, h_ts, h_ss);
  }
  report.gradient_norm = std::hypot(g_t, g_s);
  report.converged = (report.gradient_norm < 1e-10 || stationary) && !report.boundary_escape;
  if (!report.converged && report.note.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "gradient norm %.3e after %d iterations",
                  report.gradient_norm, report.iterations);
    report.note = buf;
  }

  report.theta = theta;
  report.sigma = sigma;
  report.vartheta = sigma * sigma;
  if (sigma <= 0.0 && report.note.empty())
    report.note = "stationary sigma is nonpositive (weakly informative sample)";

  // information entries of the signed-sigma model at the estimate; these
  // coincide with Psi and 4*vartheta*Phi when sigma > 0
  double psi = 0.0, phi_sigma = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double w = sigma * obs.q[i] + obs.p[i];
    psi += obs.mu[i] * obs.mu[i] / (w * w);
    phi_sigma += 2.0 * obs.q[i] * obs.q[i] / (w * w);
  }
  report.se_theta = 1.0 / std::sqrt(psi);
  report.se_sigma = 1.0 / std::sqrt(phi_sigma);
  report.se_vartheta = sigma != 0.0 ? 2.0 * std::fabs(sigma) * report.se_sigma
                                    : std::numeric_limits<double>::quiet_NaN();
  return report;
}

Prior Prior::flat() { return Prior{}; }

Prior Prior::flat_box(double theta_min, double theta_max, double vt_min, double vt_max) {
  Prior prior;
  prior.theta_min = theta_min;
  prior.theta_max = theta_max;
  prior.vartheta_min = vt_min;
  prior.vartheta_max = vt_max;
  return prior;
}

Prior Prior::gaussian(double theta_center, double theta_sd, double vt_center, double vt_sd) {
  Prior prior;
  prior.log_density = [=](double theta, double vt) {
    const double zt = (theta - theta_center) / theta_sd;
    const double zv = (vt - vt_center) / vt_sd;
    return -0.5 * (zt * zt + zv * zv);
  };
  return prior;
}

EstimateReport bayes_posterior_mean(const ShellObservations& obs, const Prior& prior,
                                    const BayesOptions& options) {
  // center the window on the numeric MLE when one exists; otherwise quadrate
  // over the whole prior support
  bool centered = false;
  double center_theta = 0.0, center_vt = 1.0, half_t0 = 0.0, half_v0 = 0.0;
  if (obs.size() >= 2) {
    try {
      const EstimateReport center = mle_numeric(obs);
      if (center.vartheta > 0.0 && !center.boundary_escape) {
        const FisherInfo info = fisher_information(obs, center.vartheta);
        centered = true;
        center_theta = center.theta;
        center_vt = center.vartheta;
        half_t0 = options.half_width * info.se_theta();
        half_v0 = options.half_width * info.se_vartheta();
      }
    } catch (const std::exception&) {
    }
  }
  if (!centered &&
      (prior.theta_min <= -1e6 || prior.theta_max >= 1e6 || prior.vartheta_max >= 1e6))
    throw std::invalid_argument(
        "bayes_posterior_mean: no usable MLE center; needs a bounded prior box");

  EstimateReport report;
  report.method = EstimateMethod::bayes;

  double widen = 1.0;
  double leak = 0.0;
  for (int attempt = 0; attempt <= options.max_widenings; ++attempt) {
    const double t_lo =
        centered ? std::max(center_theta - widen * half_t0, prior.theta_min) : prior.theta_min;
    const double t_hi =
        centered ? std::min(center_theta + widen * half_t0, prior.theta_max) : prior.theta_max;
    const double v_floor = std::max(prior.vartheta_min, centered ? center_vt * 1e-9 : 1e-12);
    const double v_lo = centered ? std::max(center_vt - widen * half_v0, v_floor) : v_floor;
    const double v_hi =
        centered ? std::min(center_vt + widen * half_v0, prior.vartheta_max) : prior.vartheta_max;
    if (!(t_lo < t_hi) || !(v_lo < v_hi))
      throw std::invalid_argument("bayes_posterior_mean: empty window (prior support too small)");

    const auto rule_t = quadrature::gauss_legendre(options.nodes, t_lo, t_hi);
    const auto rule_v = quadrature::gauss_legendre(options.nodes, v_lo, v_hi);
    const std::size_t n = rule_t.nodes.size();

    std::vector<double> logw(n * n);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double lw = log_likelihood(obs, rule_t.nodes[i], rule_v.nodes[j]) +
                    std::log(rule_t.weights[i] * rule_v.weights[j]);
        if (prior.log_density) lw += prior.log_density(rule_t.nodes[i], rule_v.nodes[j]);
        logw[i * n + j] = lw;
        peak = std::max(peak, lw);
      }
    }

    // mass on window edges that truncate the posterior; edges resting on the
    // prior support (or the vartheta > 0 boundary) cannot leak
    const bool t_lo_cut = t_lo > prior.theta_min;
    const bool t_hi_cut = t_hi < prior.theta_max;
    const bool v_lo_cut = v_lo > std::max(prior.vartheta_min, 1e-9);
    const bool v_hi_cut = v_hi < prior.vartheta_max;

    double total = 0.0, mean_t = 0.0, mean_v = 0.0, frame = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double w = std::exp(logw[i * n + j] - peak);
        total += w;
        mean_t += w * rule_t.nodes[i];
        mean_v += w * rule_v.nodes[j];
        const bool on_cut_edge = (i == 0 && t_lo_cut) || (i + 1 == n && t_hi_cut) ||
                                 (j == 0 && v_lo_cut) || (j + 1 == n && v_hi_cut);
        if (on_cut_edge) frame += w;
      }
    }
    report.theta = mean_t / total;
    report.vartheta = mean_v / total;
    leak = frame / total;
    if (leak <= options.boundary_mass_tol) {
      report.converged = true;
      break;
    }
    widen *= 2.0;
    report.converged = false;
  }
  if (!report.converged)
    report.note = "posterior mass at window boundary " + std::to_string(leak) +
                  " after widening";

  report.sigma = std::sqrt(report.vartheta);
  const FisherInfo at_mean = fisher_information(obs, report.vartheta);
  report.se_theta = at_mean.se_theta();
  report.se_vartheta = at_mean.se_vartheta();
  report.se_sigma = at_mean.se_sigma();
  return report;
}

double LanStatistics::z(double s, double tau) const { return std::exp(log_z(s, tau)); }

LanStatistics lan_statistics(const ShellObservations& obs, double theta, double vartheta) {
  require_vartheta(vartheta);
  LanStatistics lan;
  lan.fisher = fisher_information(obs, vartheta);

  const double root = std::sqrt(vartheta);
  double eta_sum = 0.0;
  double zeta_sum = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double w = root * obs.q[i] + obs.p[i];
    const double xi = (obs.y[i] + theta * obs.mu[i] + obs.nu[i]) / w;
    eta_sum += obs.mu[i] * xi / w;
    zeta_sum += obs.q[i] / w * (xi * xi - 1.0) / std::sqrt(2.0);
  }
  lan.eta = -eta_sum / std::sqrt(lan.fisher.psi);
  lan.zeta = zeta_sum / std::sqrt(2.0 * vartheta * lan.fisher.phi);

  const double base = log_likelihood(obs, theta, vartheta);
  const double psi = lan.fisher.psi;
  const double phi = lan.fisher.phi;
  lan.log_z = [obs, theta, vartheta, psi, phi, base](double s, double tau) {
    const double theta_local = theta + s / std::sqrt(psi);
    const double vt_local = vartheta + tau / std::sqrt(phi);
    if (!(vt_local > 0.0))
      throw std::domain_error("LanStatistics: local vartheta is not positive");
    return log_likelihood(obs, theta_local, vt_local) - base;
  };
  return lan;
}

}  // namespace sonde
