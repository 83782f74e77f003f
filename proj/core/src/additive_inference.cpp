#include "sonde/additive_inference.hpp"

#include <cmath>
#include <stdexcept>

namespace sonde {

namespace {

std::size_t grid_index(const FourierPath& path, double t) {
  for (std::size_t j = 0; j < path.times.size(); ++j) {
    if (std::fabs(path.times[j] - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return j;
  }
  throw std::invalid_argument("IncrementObservations: time is not on the path grid");
}

}  // namespace

IncrementObservations IncrementObservations::from_path(const FourierPath& path, int mode,
                                                       double t1, double t2) {
  if (path.model.noise != NoiseType::additive)
    throw std::invalid_argument("IncrementObservations: path is not from an additive model");
  if (mode < 1 || mode > path.mode_count())
    throw std::invalid_argument("IncrementObservations: mode out of range");
  if (!(0.0 < t1 && t1 < t2))
    throw std::invalid_argument("IncrementObservations: need 0 < t1 < t2");

  const double u0 = path.model.initial_coefficient(mode);
  IncrementObservations obs;
  obs.mode = mode;
  obs.t1 = t1;
  obs.t2 = t2;
  obs.u_at_t1 = path.value(mode, grid_index(path, t1)) - u0;
  obs.u_at_t2 = path.value(mode, grid_index(path, t2)) - u0;
  const double gap = t2 - t1;
  for (std::size_t j = 0; j < path.times.size(); ++j) {
    if (std::fabs(path.times[j] - gap) <= 1e-9 * std::max(1.0, gap)) {
      obs.u_at_gap = path.value(mode, j) - u0;
      obs.has_gap_value = true;
      break;
    }
  }
  return obs;
}

double increment_ratio_curve(double a, double b, double x) {
  if (!(a > b && b > 0.0)) throw std::invalid_argument("increment_ratio_curve: need a > b > 0");
  if (!(x > 0.0)) throw std::domain_error("increment_ratio_curve: x must be positive");
  return std::expm1(-a * x) / std::expm1(-b * x);
}

double invert_increment_ratio(double a, double b, double ratio) {
  if (!(a > b && b > 0.0)) throw std::invalid_argument("invert_increment_ratio: need a > b > 0");
  const double upper = a / b;
  if (!(ratio > 1.0 && ratio < upper))
    throw std::domain_error("invert_increment_ratio: ratio outside the open range (1, a/b)");

  // F is strictly decreasing, so bracket from below and double upward
  double lo = 1e-12;
  double hi = 1.0;
  while (increment_ratio_curve(a, b, hi) > ratio) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) throw std::domain_error("invert_increment_ratio: ratio too close to 1");
  }

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double ea = std::exp(-a * x);
    const double eb = std::exp(-b * x);
    const double g = -std::expm1(-a * x);  // 1 - e^{-ax}
    const double h = -std::expm1(-b * x);
    const double f = g / h - ratio;
    if (f > 0.0) {
      lo = x;  // F(x) still above the target
    } else {
      hi = x;
    }
    const double fp = (a * ea * h - b * eb * g) / (h * h);
    double next = x - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::fabs(next - x);
    x = next;
    if (change <= 1e-13 * x) break;
  }
  return x;
}

double recover_drift_two_point(const IncrementObservations& obs) {
  if (obs.u_at_t1 == 0.0)
    throw std::domain_error("recover_drift_two_point: U_k(t1) == 0 (degenerate draw)");
  const double ratio = obs.u_at_t2 / obs.u_at_t1;
  return invert_increment_ratio(obs.t2, obs.t1, ratio);
}

double recover_drift_three_point(const IncrementObservations& obs) {
  if (!obs.has_gap_value)
    throw std::invalid_argument("recover_drift_three_point: missing the U_k(t2 - t1) value");
  const double diff = obs.u_at_t2 - obs.u_at_t1;
  if (diff == 0.0)
    throw std::domain_error("recover_drift_three_point: U_k(t2) - U_k(t1) == 0");
  const double arg = obs.u_at_gap / diff;
  if (!(arg > 0.0))
    throw std::domain_error("recover_drift_three_point: data inconsistent with the model");
  return std::log(arg) / obs.t1;
}

double two_point_residual(const IncrementObservations& obs, double theta_mu) {
  const double ratio = obs.u_at_t2 / obs.u_at_t1;
  return std::fabs(increment_ratio_curve(obs.t2, obs.t1, theta_mu) - ratio) / std::fabs(ratio);
}

double three_point_residual(const IncrementObservations& obs, double theta_mu) {
  const double lhs = std::exp(theta_mu * obs.t1) * (obs.u_at_t2 - obs.u_at_t1);
  return std::fabs(lhs - obs.u_at_gap) / std::fabs(obs.u_at_gap);
}

VarianceEstimate sigma_mle_fourier(const FourierPath& path, double t, int modes,
                                   const std::vector<double>& theta_mu) {
  if (path.model.noise != NoiseType::additive)
    throw std::invalid_argument("sigma_mle_fourier: path is not from an additive model");
  if (modes < 1 || modes > path.mode_count())
    throw std::invalid_argument("sigma_mle_fourier: bad mode count");
  if (theta_mu.size() < static_cast<std::size_t>(modes))
    throw std::invalid_argument("sigma_mle_fourier: need theta*mu for every mode");
  if (std::isnan(t)) t = path.times.back();
  if (!(t > 0.0)) throw std::invalid_argument("sigma_mle_fourier: need t > 0");
  const std::size_t j = grid_index(path, t);

  VarianceEstimate est;
  est.modes = modes;
  est.statistics.reserve(static_cast<std::size_t>(modes));
  double acc = 0.0;
  for (int k = 1; k <= modes; ++k) {
    const double rate = theta_mu[static_cast<std::size_t>(k - 1)];
    const double relax = -std::expm1(-rate * t);
    if (relax == 0.0) throw std::domain_error("sigma_mle_fourier: vanishing relaxation factor");
    const double increment = path.value(k, j) - path.model.initial_coefficient(k);
    const double x = rate * increment / (path.model.q_k(k) * relax);
    est.statistics.push_back(x);
    acc += x * x;
  }
  est.vartheta = acc / static_cast<double>(modes);
  est.sigma = std::sqrt(est.vartheta);
  est.se_vartheta = std::sqrt(2.0 / static_cast<double>(modes)) * est.vartheta;
  est.se_sigma = est.sigma / std::sqrt(2.0 * static_cast<double>(modes));
  est.degenerate = est.vartheta == 0.0;
  return est;
}

SpatialIncrements SpatialIncrements::from_field(const FieldSample& field, bool derivative,
                                                double a, double b) {
  const std::vector<double>& source = derivative ? field.ux : field.u;
  if (source.empty())
    throw std::invalid_argument("SpatialIncrements: requested component missing from the field");
  if (!(a < b)) throw std::invalid_argument("SpatialIncrements: need a < b");

  SpatialIncrements s;
  s.time = field.time;
  s.derivative = derivative;
  for (std::size_t j = 0; j < field.x.size(); ++j) {
    if (field.x[j] >= a - 1e-12 && field.x[j] <= b + 1e-12) {
      s.x.push_back(field.x[j]);
      s.values.push_back(source[j]);
    }
  }
  if (s.x.size() < 2) throw std::invalid_argument("SpatialIncrements: window too narrow");
  s.require_uniform_grid();
  return s;
}

void SpatialIncrements::require_uniform_grid() const {
  if (x.size() < 2 || x.size() != values.size())
    throw std::invalid_argument("SpatialIncrements: malformed grid");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t j = 1; j < x.size(); ++j) {
    if (std::fabs(x[j] - x[j - 1] - h) > 1e-6 * h)
      throw std::invalid_argument("SpatialIncrements: grid is not uniform");
  }
}

namespace {

double increment_sum(const SpatialIncrements& s) {
  double q = 0.0;
  for (std::size_t j = 1; j < s.values.size(); ++j) {
    const double d = s.values[j] - s.values[j - 1];
    q += d * d;
  }
  return q;
}

// M^2 sum (second differences)^2 / (b-a)^3 over the interior points
double second_difference_sum(const SpatialIncrements& s) {
  const double m = static_cast<double>(s.values.size() - 1);
  const double len = s.window_length();
  double acc = 0.0;
  for (std::size_t j = 1; j + 1 < s.values.size(); ++j) {
    const double d = s.values[j + 1] - 2.0 * s.values[j] + s.values[j - 1];
    acc += d * d;
  }
  return m * m * acc / (len * len * len);
}

}  // namespace

QvEstimate quad_var_theta(const SpatialIncrements& samples, double sigma_known) {
  samples.require_uniform_grid();
  if (!samples.derivative)
    throw std::invalid_argument("quad_var_theta: expects u_x samples (use the fd variant for u)");
  QvEstimate est;
  est.target = QvEstimate::Target::theta_sq;
  est.increments = static_cast<int>(samples.values.size()) - 1;
  est.quadratic_sum = increment_sum(samples);
  if (est.quadratic_sum == 0.0) {
    est.degenerate = true;
    return est;
  }
  est.estimate = sigma_known * sigma_known * samples.window_length() / est.quadratic_sum;
  est.se = std::sqrt(2.0) * est.estimate / std::sqrt(static_cast<double>(est.increments));
  return est;
}

QvEstimate quad_var_sigma(const SpatialIncrements& samples, double theta_known) {
  samples.require_uniform_grid();
  if (!samples.derivative)
    throw std::invalid_argument("quad_var_sigma: expects u_x samples (use the fd variant for u)");
  QvEstimate est;
  est.target = QvEstimate::Target::sigma_sq;
  est.increments = static_cast<int>(samples.values.size()) - 1;
  est.quadratic_sum = increment_sum(samples);
  if (est.quadratic_sum == 0.0) {
    est.degenerate = true;
    return est;
  }
  est.estimate = theta_known * theta_known * est.quadratic_sum / samples.window_length();
  est.se = std::sqrt(2.0) * est.estimate / std::sqrt(static_cast<double>(est.increments));
  return est;
}

QvEstimate quad_var_theta_fd(const SpatialIncrements& samples, double sigma_known) {
  samples.require_uniform_grid();
  if (samples.values.size() < 3)
    throw std::invalid_argument("quad_var_theta_fd: needs at least three samples");
  QvEstimate est;
  est.target = QvEstimate::Target::theta_sq;
  est.experimental = true;
  est.increments = static_cast<int>(samples.values.size()) - 1;
  est.quadratic_sum = second_difference_sum(samples);
  if (est.quadratic_sum == 0.0) {
    est.degenerate = true;
    return est;
  }
  est.estimate = sigma_known * sigma_known / est.quadratic_sum;
  est.se = std::sqrt(2.0) * est.estimate / std::sqrt(static_cast<double>(est.increments));
  return est;
}

QvEstimate quad_var_sigma_fd(const SpatialIncrements& samples, double theta_known) {
  samples.require_uniform_grid();
  if (samples.values.size() < 3)
    throw std::invalid_argument("quad_var_sigma_fd: needs at least three samples");
  QvEstimate est;
  est.target = QvEstimate::Target::sigma_sq;
  est.experimental = true;
  est.increments = static_cast<int>(samples.values.size()) - 1;
  est.quadratic_sum = second_difference_sum(samples);
  if (est.quadratic_sum == 0.0) {
    est.degenerate = true;
    return est;
  }
  est.estimate = theta_known * theta_known * est.quadratic_sum;
  est.se = std::sqrt(2.0) * est.estimate / std::sqrt(static_cast<double>(est.increments));
  return est;
}

}  // namespace sonde
