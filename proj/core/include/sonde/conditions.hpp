#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sonde/model.hpp"

namespace sonde {

enum class Verdict { holds, fails, undecided };
enum class DecisionMethod { exponent_rule, partial_sum_heuristic };

std::string to_string(Verdict v);
std::string to_string(DecisionMethod m);

/// One decided condition. Ids used across the toolkit:
///   shell_global      limit (sigma q_k + p_k)^2 / (theta mu_k + nu_k) -> 0
///   shell_horizon     T (sigma q_k + p_k)^2 - 4 (theta mu_k + nu_k) bounded above
///   ident_theta       sum mu_k^2 / (q_k + p_k)^2 = inf
///   ident_sigma       sum q_k^2 / (q_k + p_k)^2 = inf
///   pq_sufficient     limsup p_k / (sqrt(k) q_k) < inf
///   additive_sq       sum q_k^2 / mu_k^2 < inf
struct ConditionResult {
  std::string id;
  Verdict verdict = Verdict::undecided;
  DecisionMethod method = DecisionMethod::exponent_rule;
  std::string diagnostic;
  /// For shell_horizon: a horizon for which the bound is witnessed
  /// (infinity when any horizon works); NaN otherwise.
  double witness = std::numeric_limits<double>::quiet_NaN();
};

struct ConditionReport {
  std::vector<ConditionResult> rows;

  const ConditionResult* find(const std::string& id) const;
  Verdict verdict(const std::string& id) const;
  bool any_undecided() const;
};

/// Well-posedness of the shell model over the whole parameter box, decided
/// at the extremal corner (theta_min, sigma_max). Models whose drift
/// theta mu_k + nu_k can reach zero somewhere on the box are rejected.
ConditionReport check_wellposed_shell(const ModelSpec& model);

/// Statistical regularity of the shell experiment: divergence of the two
/// identifiability series plus the sufficient p/q comparison.
ConditionReport check_regularity(const ModelSpec& model);

/// Square-summability condition for the additive model.
ConditionReport check_wellposed_additive(const ModelSpec& model);

/// Union of the relevant checks for the model's noise type.
ConditionReport check_model(const ModelSpec& model);

/// Whether every condition the toolkit requires before simulating holds:
/// shell needs (shell_global or shell_horizon) plus both identifiability
/// series; additive needs additive_sq.
bool required_conditions_hold(const ModelSpec& model, const ConditionReport& report);

// Heuristic tail analysis used for explicit families (and exercised against
// the exponent rule in tests). Fits ln a_k ~ ln c + r ln k + s ln ln(1+k) on
// the tail of the evaluable range.
struct TailFit {
  bool ok = false;
  double power = 0.0;
  double log_power = 0.0;
};
TailFit fit_tail(const std::function<double(int)>& term, int max_index);

Verdict heuristic_series_diverges(const std::function<double(int)>& term, int max_index,
                                  std::string* diagnostic = nullptr);
Verdict heuristic_limit_is_zero(const std::function<double(int)>& term, int max_index,
                                std::string* diagnostic = nullptr);
Verdict heuristic_is_bounded(const std::function<double(int)>& term, int max_index,
                             std::string* diagnostic = nullptr);

}  // namespace sonde
