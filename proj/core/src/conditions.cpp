#include "sonde/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sonde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Verdict from_bool(bool b) { return b ? Verdict::holds : Verdict::fails; }

bool uses_explicit(std::initializer_list<const CoefficientFamily*> families) {
  for (const auto* f : families) {
    if (f->is_explicit()) return true;
  }
  return false;
}

int evaluable_range(const ModelSpec& model) {
  int limit = 1000000;
  for (const auto* f : {&model.mu, &model.nu, &model.q, &model.p}) {
    if (f->is_explicit()) limit = std::min(limit, f->max_index());
  }
  return limit;
}

// Growth of theta*mu_k + nu_k at a fixed theta, with the positivity screen.
// Negative theta is representable only when nu dominates mu.
Growth drift_growth(const ModelSpec& model, double theta) {
  const Growth gmu = model.mu.growth();
  const Growth gnu = model.nu.growth();
  if (!gmu.known || !gnu.known) return Growth::unknown();
  if (theta > 0.0) return Growth::sum(gmu.scaled(theta), gnu);
  if (theta == 0.0) {
    if (gnu.zero) throw std::invalid_argument("conditions: drift vanishes at theta = 0");
    return gnu;
  }
  // theta < 0: nu_k - |theta| mu_k
  if (gmu.zero) return gnu;
  if (gnu.zero || gnu.compare_order(gmu) < 0)
    throw std::invalid_argument("conditions: drift goes negative at the lower theta corner");
  if (gnu.compare_order(gmu) > 0) return gnu;
  Growth g = gnu;
  g.scale = gnu.scale + theta * gmu.scale;
  if (!(g.scale > 0.0))
    throw std::invalid_argument("conditions: drift goes negative at the lower theta corner");
  return g;
}

void screen_drift_positivity(const ModelSpec& model) {
  const int upto = std::min(evaluable_range(model), std::max(model.modes, 1000));
  for (int k = 1; k <= upto; ++k) {
    if (!(model.box.theta_min * model.mu_k(k) + model.nu_k(k) > 0.0))
      throw std::invalid_argument(
          "conditions: theta*mu_k + nu_k not positive over the parameter box (k=" +
          std::to_string(k) + ")");
  }
  drift_growth(model, model.box.theta_min);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::undecided:
      return "undecided";
  }
  return "?";
}

std::string to_string(DecisionMethod m) {
  return m == DecisionMethod::exponent_rule ? "exponent_rule" : "partial_sum_heuristic";
}

const ConditionResult* ConditionReport::find(const std::string& id) const {
  for (const auto& row : rows) {
    if (row.id == id) return &row;
  }
  return nullptr;
}

Verdict ConditionReport::verdict(const std::string& id) const {
  const auto* row = find(id);
  if (row == nullptr) throw std::out_of_range("ConditionReport: unknown condition " + id);
  return row->verdict;
}

bool ConditionReport::any_undecided() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ConditionResult& r) { return r.verdict == Verdict::undecided; });
}

TailFit fit_tail(const std::function<double(int)>& term, int max_index) {
  TailFit fit;
  if (max_index < 64) return fit;
  const int k3 = max_index;
  const int k2 = max_index / 2;
  const int k1 = max_index / 4;
  const double a1 = term(k1);
  const double a2 = term(k2);
  const double a3 = term(k3);
  if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0)) return fit;

  // two-equation solve for (r, s) in ln a = const + r ln k + s ln ln(1+k)
  const auto lx = [](int k) { return std::log(static_cast<double>(k)); };
  const auto ll = [](int k) { return std::log(std::log1p(static_cast<double>(k))); };
  const double A11 = lx(k2) - lx(k1), A12 = ll(k2) - ll(k1);
  const double A21 = lx(k3) - lx(k2), A22 = ll(k3) - ll(k2);
  const double b1 = std::log(a2) - std::log(a1);
  const double b2 = std::log(a3) - std::log(a2);
  const double det = A11 * A22 - A12 * A21;
  if (det == 0.0) return fit;
  fit.power = (b1 * A22 - b2 * A12) / det;
  fit.log_power = (A11 * b2 - A21 * b1) / det;
  fit.ok = std::isfinite(fit.power) && std::isfinite(fit.log_power);
  return fit;
}

namespace {

constexpr double kFitBand = 0.02;  // indecision band around exponent boundaries

double partial_sum(const std::function<double(int)>& term, int max_index) {
  double s = 0.0;
  for (int k = 1; k <= max_index; ++k) s += term(k);
  return s;
}

}  // namespace

namespace {

// overflow/underflow of the tail term decides limits outright
enum class TailScale { normal, vanished, exploded };

TailScale tail_scale(const std::function<double(int)>& term, int max_index) {
  const double last = term(max_index);
  if (last == 0.0) return TailScale::vanished;
  if (!std::isfinite(last) || last > 1e100) return TailScale::exploded;
  return TailScale::normal;
}

}  // namespace

Verdict heuristic_series_diverges(const std::function<double(int)>& term, int max_index,
                                  std::string* diagnostic) {
  const TailScale scale = tail_scale(term, max_index);
  if (scale == TailScale::exploded) {
    if (diagnostic != nullptr) *diagnostic = "tail term overflows";
    return Verdict::holds;
  }
  if (scale == TailScale::vanished) {
    if (diagnostic != nullptr) *diagnostic = "tail term underflows to zero";
    return Verdict::fails;
  }
  const TailFit fit = fit_tail(term, max_index);
  const double sum = partial_sum(term, std::min(max_index, 1000000));
  if (diagnostic != nullptr)
    *diagnostic = "partial_sum=" + num(sum) +
                  (fit.ok ? " tail_r=" + num(fit.power) + " tail_s=" + num(fit.log_power) : "");
  if (!fit.ok) return Verdict::undecided;
  if (fit.power > -1.0 + kFitBand) return Verdict::holds;
  if (fit.power < -1.0 - kFitBand) return Verdict::fails;
  if (fit.log_power > -1.0 + kFitBand) return Verdict::holds;
  if (fit.log_power < -1.0 - kFitBand) return Verdict::fails;
  return Verdict::undecided;
}

Verdict heuristic_limit_is_zero(const std::function<double(int)>& term, int max_index,
                                std::string* diagnostic) {
  const TailScale scale = tail_scale(term, max_index);
  if (scale == TailScale::exploded) return Verdict::fails;
  if (scale == TailScale::vanished) return Verdict::holds;
  const TailFit fit = fit_tail(term, max_index);
  if (diagnostic != nullptr && fit.ok)
    *diagnostic = "tail_r=" + num(fit.power) + " tail_s=" + num(fit.log_power) +
                  " last=" + num(term(max_index));
  if (!fit.ok) return Verdict::undecided;
  if (fit.power < -kFitBand) return Verdict::holds;
  if (fit.power > kFitBand) return Verdict::fails;
  if (fit.log_power < -kFitBand) return Verdict::holds;
  if (fit.log_power > kFitBand) return Verdict::fails;
  return Verdict::undecided;
}

Verdict heuristic_is_bounded(const std::function<double(int)>& term, int max_index,
                             std::string* diagnostic) {
  const TailScale scale = tail_scale(term, max_index);
  if (scale == TailScale::exploded) return Verdict::fails;
  if (scale == TailScale::vanished) return Verdict::holds;
  const TailFit fit = fit_tail(term, max_index);
  if (diagnostic != nullptr && fit.ok)
    *diagnostic = "tail_r=" + num(fit.power) + " tail_s=" + num(fit.log_power);
  if (!fit.ok) return Verdict::undecided;
  if (fit.power < -kFitBand) return Verdict::holds;
  if (fit.power > kFitBand) return Verdict::fails;
  if (fit.log_power < kFitBand) return Verdict::holds;  // includes flat tails
  return Verdict::fails;
}

ConditionReport check_wellposed_shell(const ModelSpec& model) {
  if (model.noise != NoiseType::shell)
    throw std::invalid_argument("check_wellposed_shell: not a shell model");
  screen_drift_positivity(model);

  const double theta_lo = model.box.theta_min;
  const double sigma_hi = model.box.sigma_max;

  ConditionReport report;
  ConditionResult global;
  global.id = "shell_global";
  ConditionResult horizon;
  horizon.id = "shell_horizon";

  const bool heuristic = uses_explicit({&model.mu, &model.nu, &model.q, &model.p});
  const auto ratio_term = [&](int k) {
    const double w = sigma_hi * model.q_k(k) + model.p_k(k);
    return w * w / (theta_lo * model.mu_k(k) + model.nu_k(k));
  };

  if (!heuristic) {
    const Growth numerator =
        Growth::sum(model.q.growth().scaled(sigma_hi), model.p.growth()).squared();
    const Growth denominator = drift_growth(model, theta_lo);
    const Growth ratio = numerator / denominator;

    global.method = DecisionMethod::exponent_rule;
    global.verdict = from_bool(ratio.limit_is_zero());
    global.diagnostic = "ratio order exp=" + num(ratio.exp_rate) + " k^" + num(ratio.power) +
                        " ln^" + num(ratio.log_power);

    horizon.method = DecisionMethod::exponent_rule;
    horizon.verdict = from_bool(ratio.is_bounded());
    if (horizon.verdict == Verdict::holds) {
      if (global.verdict == Verdict::holds || numerator.is_bounded()) {
        horizon.witness = kInf;
        horizon.diagnostic = "bounded for every horizon";
      } else {
        // same growth order on both sides: the sup of the ratio pins the horizon
        double sup = ratio.scale;
        for (int k = 1; k <= 10000; ++k) sup = std::max(sup, ratio_term(k));
        horizon.witness = 4.0 / sup;
        horizon.diagnostic = "witness horizon " + num(horizon.witness) + " (sup ratio " +
                             num(sup) + ")";
      }
    } else {
      horizon.diagnostic = "noise order exceeds drift order";
    }
  } else {
    const int range = evaluable_range(model);
    global.method = DecisionMethod::partial_sum_heuristic;
    global.verdict = heuristic_limit_is_zero(ratio_term, range, &global.diagnostic);
    horizon.method = DecisionMethod::partial_sum_heuristic;
    horizon.verdict = heuristic_is_bounded(ratio_term, range, &horizon.diagnostic);
    if (horizon.verdict == Verdict::holds) {
      double sup = 0.0;
      for (int k = 1; k <= range; ++k) sup = std::max(sup, ratio_term(k));
      horizon.witness = 4.0 / sup;
    }
  }

  report.rows.push_back(std::move(global));
  report.rows.push_back(std::move(horizon));
  return report;
}

ConditionReport check_regularity(const ModelSpec& model) {
  if (model.noise != NoiseType::shell)
    throw std::invalid_argument("check_regularity: not a shell model");

  ConditionReport report;
  ConditionResult c1;
  c1.id = "ident_theta";
  ConditionResult c2;
  c2.id = "ident_sigma";
  ConditionResult pq;
  pq.id = "pq_sufficient";

  const bool heuristic = uses_explicit({&model.mu, &model.q, &model.p});
  const auto term_c1 = [&](int k) {
    const double qp = model.q_k(k) + model.p_k(k);
    const double m = model.mu_k(k);
    return m * m / (qp * qp);
  };
  const auto term_c2 = [&](int k) {
    const double qp = model.q_k(k) + model.p_k(k);
    const double v = model.q_k(k);
    return v * v / (qp * qp);
  };
  const auto term_pq = [&](int k) {
    return model.p_k(k) / (std::sqrt(static_cast<double>(k)) * model.q_k(k));
  };

  if (!heuristic) {
    const Growth qp = Growth::sum(model.q.growth(), model.p.growth());
    const Growth g1 = model.mu.growth().squared() / qp.squared();
    const Growth g2 = model.q.growth().squared() / qp.squared();

    c1.method = c2.method = pq.method = DecisionMethod::exponent_rule;
    c1.verdict = from_bool(g1.series_diverges());
    c1.diagnostic = "term order k^" + num(g1.power) + " ln^" + num(g1.log_power) +
                    (g1.exp_rate != 0.0 ? " exp=" + num(g1.exp_rate) : "");
    c2.verdict = from_bool(g2.series_diverges());
    c2.diagnostic = "term order k^" + num(g2.power) + " ln^" + num(g2.log_power) +
                    (g2.exp_rate != 0.0 ? " exp=" + num(g2.exp_rate) : "");
    if (model.p.is_zero()) {
      pq.verdict = Verdict::holds;
      pq.diagnostic = "p == 0";
    } else {
      const Growth gpq =
          model.p.growth() / (Growth{0.0, 0.5, 0.0, 1.0, true, false} * model.q.growth());
      pq.verdict = from_bool(gpq.is_bounded());
      pq.diagnostic = "p/(sqrt(k) q) order k^" + num(gpq.power) + " ln^" + num(gpq.log_power);
    }
  } else {
    const int range = evaluable_range(model);
    c1.method = c2.method = pq.method = DecisionMethod::partial_sum_heuristic;
    c1.verdict = heuristic_series_diverges(term_c1, range, &c1.diagnostic);
    c2.verdict = heuristic_series_diverges(term_c2, range, &c2.diagnostic);
    pq.verdict = model.p.is_zero() ? Verdict::holds
                                   : heuristic_is_bounded(term_pq, range, &pq.diagnostic);
  }

  report.rows.push_back(std::move(c1));
  report.rows.push_back(std::move(c2));
  report.rows.push_back(std::move(pq));
  return report;
}

ConditionReport check_wellposed_additive(const ModelSpec& model) {
  if (model.noise != NoiseType::additive)
    throw std::invalid_argument("check_wellposed_additive: not an additive model");

  ConditionReport report;
  ConditionResult sq;
  sq.id = "additive_sq";
  const auto term = [&](int k) {
    const double r = model.q_k(k) / model.mu_k(k);
    return r * r;
  };

  if (!uses_explicit({&model.mu, &model.q})) {
    const Growth g = model.q.growth().squared() / model.mu.growth().squared();
    sq.method = DecisionMethod::exponent_rule;
    sq.verdict = from_bool(!g.series_diverges());
    sq.diagnostic = "term order k^" + num(g.power) + " ln^" + num(g.log_power) +
                    (g.exp_rate != 0.0 ? " exp=" + num(g.exp_rate) : "");
  } else {
    sq.method = DecisionMethod::partial_sum_heuristic;
    const Verdict diverges = heuristic_series_diverges(term, evaluable_range(model), &sq.diagnostic);
    sq.verdict = diverges == Verdict::undecided
                     ? Verdict::undecided
                     : from_bool(diverges == Verdict::fails);
  }

  report.rows.push_back(std::move(sq));
  return report;
}

ConditionReport check_model(const ModelSpec& model) {
  ConditionReport report;
  if (model.noise == NoiseType::shell) {
    for (auto& row : check_wellposed_shell(model).rows) report.rows.push_back(std::move(row));
    for (auto& row : check_regularity(model).rows) report.rows.push_back(std::move(row));
  } else {
    for (auto& row : check_wellposed_additive(model).rows) report.rows.push_back(std::move(row));
  }
  return report;
}

bool required_conditions_hold(const ModelSpec& model, const ConditionReport& report) {
  if (model.noise == NoiseType::shell) {
    const bool wellposed = report.verdict("shell_global") == Verdict::holds ||
                           report.verdict("shell_horizon") == Verdict::holds;
    return wellposed && report.verdict("ident_theta") == Verdict::holds &&
           report.verdict("ident_sigma") == Verdict::holds;
  }
  return report.verdict("additive_sq") == Verdict::holds;
}

}  // namespace sonde
