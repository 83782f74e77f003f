#pragma once

#include <string>
#include <vector>

namespace sonde {

/// Asymptotic growth of a nonnegative sequence, represented as
///   scale * exp(exp_rate * k) * k^power * ln(1+k)^log_power,  k -> infinity.
///
/// Sequences with no usable asymptotics (explicit lists) are marked unknown;
/// the identically-zero sequence is marked zero. The algebra below is exact
/// on the closed family catalog, which is what makes the condition analyzer
/// decidable.
struct Growth {
  double exp_rate = 0.0;
  double power = 0.0;
  double log_power = 0.0;
  double scale = 1.0;
  bool known = true;
  bool zero = false;

  static Growth unknown() { return Growth{0, 0, 0, 1, false, false}; }
  static Growth zero_sequence() { return Growth{0, 0, 0, 0, true, true}; }

  Growth operator*(const Growth& other) const;
  Growth operator/(const Growth& other) const;
  Growth squared() const { return *this * *this; }
  Growth scaled(double c) const;

  /// Growth of the termwise sum of two nonnegative sequences (max rule).
  static Growth sum(const Growth& a, const Growth& b);

  /// Lexicographic comparison of (exp_rate, power, log_power).
  int compare_order(const Growth& other) const;

  bool limit_is_zero() const;
  bool is_bounded() const;
  bool diverges_to_infinity() const;
  /// Whether sum_k of the sequence is +infinity (Bertrand series rule;
  /// the r == -1, s == -1 boundary diverges).
  bool series_diverges() const;
};

/// One coefficient sequence (mu_k, nu_k, q_k or p_k): an evaluator plus its
/// known asymptotic exponents. The catalog is closed; arbitrary user data
/// enters through the explicit kind.
class CoefficientFamily {
 public:
  enum class Kind { constant, power, power_log, exponential_decay, explicit_list, zero };

  CoefficientFamily() : CoefficientFamily(zero_family()) {}

  static CoefficientFamily constant(double c);
  /// c * k^r
  static CoefficientFamily power(double c, double r);
  /// c * k^r * ln(1+k)^s
  static CoefficientFamily power_log(double c, double r, double s);
  /// c * exp(-k)
  static CoefficientFamily exponential_decay(double c);
  static CoefficientFamily explicit_list(std::vector<double> values);
  static CoefficientFamily zero_family();

  /// Term at index k >= 1. Throws std::out_of_range past the end of an
  /// explicit list and std::invalid_argument for k < 1.
  double eval(int k) const;

  Kind kind() const { return kind_; }
  Growth growth() const;
  bool is_zero() const;
  bool is_explicit() const { return kind_ == Kind::explicit_list; }

  /// Largest evaluable index; 0 means unbounded.
  int max_index() const;

  double param_c() const { return c_; }
  double param_r() const { return r_; }
  double param_s() const { return s_; }
  const std::vector<double>& values() const { return values_; }

  std::string describe() const;

  bool operator==(const CoefficientFamily& other) const = default;

 private:
  CoefficientFamily(Kind kind, double c, double r, double s, std::vector<double> values);

  Kind kind_;
  double c_ = 0.0;
  double r_ = 0.0;
  double s_ = 0.0;
  std::vector<double> values_;
};

}  // namespace sonde
