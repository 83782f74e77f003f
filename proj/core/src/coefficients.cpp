#include "sonde/coefficients.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sonde {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

Growth Growth::operator*(const Growth& other) const {
  if (zero || other.zero) return zero_sequence();
  if (!known || !other.known) return unknown();
  return Growth{exp_rate + other.exp_rate, power + other.power, log_power + other.log_power,
                scale * other.scale, true, false};
}

Growth Growth::operator/(const Growth& other) const {
  if (other.zero) throw std::domain_error("Growth: division by the zero sequence");
  if (zero) return zero_sequence();
  if (!known || !other.known) return unknown();
  return Growth{exp_rate - other.exp_rate, power - other.power, log_power - other.log_power,
                scale / other.scale, true, false};
}

Growth Growth::scaled(double c) const {
  if (c < 0.0) throw std::domain_error("Growth: negative scaling");
  if (c == 0.0 || zero) return zero_sequence();
  if (!known) return unknown();
  return Growth{exp_rate, power, log_power, scale * c, true, false};
}

Growth Growth::sum(const Growth& a, const Growth& b) {
  if (a.zero) return b;
  if (b.zero) return a;
  if (!a.known || !b.known) return unknown();
  const int cmp = a.compare_order(b);
  if (cmp > 0) return a;
  if (cmp < 0) return b;
  Growth g = a;
  g.scale += b.scale;
  return g;
}

int Growth::compare_order(const Growth& other) const {
  if (exp_rate != other.exp_rate) return exp_rate < other.exp_rate ? -1 : 1;
  if (power != other.power) return power < other.power ? -1 : 1;
  if (log_power != other.log_power) return log_power < other.log_power ? -1 : 1;
  return 0;
}

bool Growth::limit_is_zero() const {
  if (zero) return true;
  if (!known) throw std::logic_error("Growth: limit query on unknown asymptotics");
  if (exp_rate != 0.0) return exp_rate < 0.0;
  if (power != 0.0) return power < 0.0;
  return log_power < 0.0;
}

bool Growth::is_bounded() const {
  if (zero) return true;
  if (!known) throw std::logic_error("Growth: bound query on unknown asymptotics");
  if (exp_rate != 0.0) return exp_rate < 0.0;
  if (power != 0.0) return power < 0.0;
  return log_power <= 0.0;
}

bool Growth::diverges_to_infinity() const {
  if (zero) return false;
  if (!known) throw std::logic_error("Growth: divergence query on unknown asymptotics");
  if (exp_rate != 0.0) return exp_rate > 0.0;
  if (power != 0.0) return power > 0.0;
  return log_power > 0.0;
}

bool Growth::series_diverges() const {
  if (zero) return false;
  if (!known) throw std::logic_error("Growth: series query on unknown asymptotics");
  if (exp_rate != 0.0) return exp_rate > 0.0;
  if (power != -1.0) return power > -1.0;
  // Bertrand boundary sum k^-1 ln(1+k)^s: converges only for s < -1
  return log_power >= -1.0;
}

CoefficientFamily::CoefficientFamily(Kind kind, double c, double r, double s,
                                     std::vector<double> values)
    : kind_(kind), c_(c), r_(r), s_(s), values_(std::move(values)) {}

CoefficientFamily CoefficientFamily::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("CoefficientFamily::constant: c must be positive");
  return {Kind::constant, c, 0.0, 0.0, {}};
}

CoefficientFamily CoefficientFamily::power(double c, double r) {
  if (!(c > 0.0)) throw std::invalid_argument("CoefficientFamily::power: c must be positive");
  if (r == 0.0) return constant(c);
  return {Kind::power, c, r, 0.0, {}};
}

CoefficientFamily CoefficientFamily::power_log(double c, double r, double s) {
  if (!(c > 0.0)) throw std::invalid_argument("CoefficientFamily::power_log: c must be positive");
  if (s == 0.0) return power(c, r);
  return {Kind::power_log, c, r, s, {}};
}

CoefficientFamily CoefficientFamily::exponential_decay(double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("CoefficientFamily::exponential_decay: c must be positive");
  return {Kind::exponential_decay, c, 0.0, 0.0, {}};
}

CoefficientFamily CoefficientFamily::explicit_list(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("CoefficientFamily::explicit_list: empty value list");
  for (double v : values) {
    if (!std::isfinite(v))
      throw std::invalid_argument("CoefficientFamily::explicit_list: non-finite value");
  }
  return {Kind::explicit_list, 0.0, 0.0, 0.0, std::move(values)};
}

CoefficientFamily CoefficientFamily::zero_family() { return {Kind::zero, 0.0, 0.0, 0.0, {}}; }

double CoefficientFamily::eval(int k) const {
  if (k < 1) throw std::invalid_argument("CoefficientFamily::eval: index must be >= 1");
  switch (kind_) {
    case Kind::constant:
      return c_;
    case Kind::power:
      return c_ * std::pow(static_cast<double>(k), r_);
    case Kind::power_log:
      return c_ * std::pow(static_cast<double>(k), r_) *
             std::pow(std::log1p(static_cast<double>(k)), s_);
    case Kind::exponential_decay:
      return c_ * std::exp(-static_cast<double>(k));
    case Kind::explicit_list:
      if (static_cast<std::size_t>(k) > values_.size())
        throw std::out_of_range("CoefficientFamily::eval: index past end of explicit list");
      return values_[static_cast<std::size_t>(k - 1)];
    case Kind::zero:
      return 0.0;
  }
  throw std::logic_error("CoefficientFamily::eval: bad kind");
}

Growth CoefficientFamily::growth() const {
  switch (kind_) {
    case Kind::constant:
      return Growth{0.0, 0.0, 0.0, c_, true, false};
    case Kind::power:
      return Growth{0.0, r_, 0.0, c_, true, false};
    case Kind::power_log:
      return Growth{0.0, r_, s_, c_, true, false};
    case Kind::exponential_decay:
      return Growth{-1.0, 0.0, 0.0, c_, true, false};
    case Kind::explicit_list:
      return Growth::unknown();
    case Kind::zero:
      return Growth::zero_sequence();
  }
  throw std::logic_error("CoefficientFamily::growth: bad kind");
}

bool CoefficientFamily::is_zero() const {
  if (kind_ == Kind::zero) return true;
  if (kind_ == Kind::explicit_list) {
    for (double v : values_) {
      if (v != 0.0) return false;
    }
    return true;
  }
  return false;
}

int CoefficientFamily::max_index() const {
  return kind_ == Kind::explicit_list ? static_cast<int>(values_.size()) : 0;
}

std::string CoefficientFamily::describe() const {
  switch (kind_) {
    case Kind::constant:
      return num(c_);
    case Kind::power:
      return num(c_) + "*k^" + num(r_);
    case Kind::power_log:
      return num(c_) + "*k^" + num(r_) + "*ln(1+k)^" + num(s_);
    case Kind::exponential_decay:
      return num(c_) + "*exp(-k)";
    case Kind::explicit_list:
      return "explicit[" + std::to_string(values_.size()) + "]";
    case Kind::zero:
      return "0";
  }
  return "?";
}

}  // namespace sonde
