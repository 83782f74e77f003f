#include "sonde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonde::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

namespace {

double rational(double r, const double* num, const double* den) {
  // degree-7 numerator and denominator, Horner form, den[0] == 1 implied
  double p = num[7];
  for (int i = 6; i >= 0; --i) p = p * r + num[i];
  double q = den[7];
  for (int i = 6; i >= 1; --i) q = q * r + den[i];
  q = q * r + 1.0;
  return p / q;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");

  // AS 241 (PPND16)
  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static const double b[8] = {
      0.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static const double c[8] = {
      1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
      3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      0.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      0.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * rational(r, a, b);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double z;
  if (r <= 5.0) {
    z = rational(r - 1.6, c, d);
  } else {
    z = rational(r - 5.0, e, f);
  }
  return (q < 0.0) ? -z : z;
}

Moments moments(const std::vector<double>& sample) {
  Moments m;
  m.count = sample.size();
  if (sample.empty()) return m;
  double sum = 0.0;
  for (double x : sample) sum += x;
  m.mean = sum / static_cast<double>(sample.size());
  if (sample.size() < 2) return m;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : sample) {
    const double d1 = x - m.mean;
    const double d2 = d1 * d1;
    m2 += d2;
    m3 += d2 * d1;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(sample.size());
  m.sd = std::sqrt(m2 / (n - 1.0));
  const double var = m2 / n;
  if (var > 0.0) {
    m.skewness = (m3 / n) / std::pow(var, 1.5);
    m.excess_kurtosis = (m4 / n) / (var * var) - 3.0;
  }
  return m;
}

double sample_mean(const std::vector<double>& sample) { return moments(sample).mean; }

double sample_sd(const std::vector<double>& sample) { return moments(sample).sd; }

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    const double upper = static_cast<double>(i + 1) / n - F;
    const double lower = F - static_cast<double>(i) / n;
    dist = std::max(dist, std::max(upper, lower));
  }
  return dist;
}

double ks_statistic_normal(std::vector<double> sample) {
  return ks_statistic(std::move(sample), [](double x) { return normal_cdf(x); });
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile_sorted: p outside [0,1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double w = h - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace sonde::stats
