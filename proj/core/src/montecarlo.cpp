#include "sonde/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "sonde/additive_inference.hpp"
#include "sonde/conditions.hpp"
#include "sonde/shell_inference.hpp"
#include "sonde/simulate.hpp"

namespace sonde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TrackLayout {
  std::string name;
  int modes = 0;
  double truth = 0.0;
  double rate = 0.0;  // normalized error = (estimate - truth) * rate
};

// Information content of the first `modes` modes with dark ones dropped,
// evaluated at the true vartheta.
FisherInfo fisher_at_truth(const ModelSpec& model, int modes) {
  ShellObservations obs;
  for (int k = 1; k <= modes; ++k) {
    if (model.initial_coefficient(k) == 0.0) continue;
    obs.y.push_back(0.0);
    obs.mu.push_back(model.mu_k(k));
    obs.nu.push_back(model.nu_k(k));
    obs.q.push_back(model.q_k(k));
    obs.p.push_back(model.p_k(k));
  }
  return fisher_information(obs, model.vartheta0());
}

std::vector<TrackLayout> build_layout(const CampaignConfig& cfg) {
  std::vector<TrackLayout> layout;
  const ModelSpec& model = cfg.model;
  for (int n : cfg.sweep) {
    for (const std::string& estimator : cfg.estimators) {
      if (model.noise == NoiseType::shell) {
        const FisherInfo info = fisher_at_truth(model, n);
        const std::string suffix = estimator == "bayes" ? "_bayes" : "_mle";
        layout.push_back({"theta" + suffix, n, model.theta0, std::sqrt(info.psi)});
        layout.push_back({"sigma" + suffix, n, model.sigma0, std::sqrt(info.phi_sigma)});
      } else {
        const double vt = model.vartheta0();
        const double nn = static_cast<double>(n);
        layout.push_back({"vartheta_fourier", n, vt, std::sqrt(nn / 2.0) / vt});
        layout.push_back({"sigma_fourier", n, model.sigma0, std::sqrt(2.0 * nn) / model.sigma0});
      }
    }
  }
  return layout;
}

}  // namespace

void CampaignConfig::validate() const {
  model.validate();
  if (replications < 1) throw std::invalid_argument("CampaignConfig: replications >= 1");
  if (workers < 1) throw std::invalid_argument("CampaignConfig: workers >= 1");
  if (sweep.empty()) throw std::invalid_argument("CampaignConfig: empty mode sweep");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i] < 1 || sweep[i] > model.modes)
      throw std::invalid_argument("CampaignConfig: sweep value outside [1, modes]");
    if (i > 0 && sweep[i] <= sweep[i - 1])
      throw std::invalid_argument("CampaignConfig: sweep must be increasing");
  }
  if (estimators.empty()) throw std::invalid_argument("CampaignConfig: no estimators selected");
  for (const std::string& e : estimators) {
    const bool shell = model.noise == NoiseType::shell;
    const bool ok = shell ? (e == "mle" || e == "bayes") : (e == "sigma_fourier");
    if (!ok)
      throw std::invalid_argument("CampaignConfig: estimator '" + e + "' does not fit the model");
  }
}

std::vector<double> EstimatorTrack::successes() const {
  std::vector<double> out;
  out.reserve(normalized_errors.size());
  for (double e : normalized_errors) {
    if (!std::isnan(e)) out.push_back(e);
  }
  return out;
}

const EstimatorTrack* CampaignSummary::find(const std::string& name, int modes) const {
  for (const auto& track : tracks) {
    if (track.name == name && track.modes == modes) return &track;
  }
  return nullptr;
}

CampaignSummary run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  if (!cfg.force) {
    const ConditionReport report = check_model(cfg.model);
    if (report.any_undecided())
      throw ConditionGateError("campaign: conditions undecided (pass force to override)");
    if (!required_conditions_hold(cfg.model, report))
      throw ConditionGateError("campaign: required conditions fail (pass force to override)");
  }

  const std::vector<TrackLayout> layout = build_layout(cfg);
  const std::size_t cells = layout.size();
  const std::size_t reps = static_cast<std::size_t>(cfg.replications);

  // one row of estimates per replication; NaN marks a failed estimator call
  std::vector<double> table(reps * cells, kNaN);

  const auto run_replication = [&](std::uint32_t r) {
    const FourierPath path = simulate(cfg.model, cfg.seed, r);
    std::size_t cell = 0;
    for (std::size_t sweep_i = 0; sweep_i < cfg.sweep.size(); ++sweep_i) {
      const int n = cfg.sweep[sweep_i];
      for (const std::string& estimator : cfg.estimators) {
        if (cfg.model.noise == NoiseType::shell) {
          try {
            const ShellObservations obs = ShellObservations::from_path(path, n);
            EstimateReport est;
            if (estimator == "bayes") {
              est = bayes_posterior_mean(obs);
            } else {
              est = obs.p_is_zero() ? mle_closed_form(obs) : mle_numeric(obs);
            }
            if (est.converged || est.method == EstimateMethod::closed_form) {
              table[r * cells + cell] = est.theta;
              table[r * cells + cell + 1] = est.sigma;
            }
          } catch (const std::exception&) {
            // row stays NaN and is counted as a failure
          }
          cell += 2;
        } else {
          try {
            std::vector<double> drift(static_cast<std::size_t>(n));
            for (int k = 1; k <= n; ++k)
              drift[static_cast<std::size_t>(k - 1)] = cfg.model.theta0 * cfg.model.mu_k(k);
            const VarianceEstimate est = sigma_mle_fourier(path, kNaN, n, drift);
            table[r * cells + cell] = est.vartheta;
            table[r * cells + cell + 1] = est.sigma;
          } catch (const std::exception&) {
          }
          cell += 2;
        }
      }
    }
  };

  if (cfg.workers == 1) {
    for (std::uint32_t r = 0; r < reps; ++r) run_replication(r);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min<int>(cfg.workers, static_cast<int>(reps));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint32_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
          run_replication(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  CampaignSummary summary;
  summary.seed = cfg.seed;
  summary.replications = cfg.replications;

  for (std::size_t cell = 0; cell < cells; ++cell) {
    EstimatorTrack track;
    track.modes = layout[cell].modes;
    track.name = layout[cell].name;
    track.truth = layout[cell].truth;
    track.theoretical_sd = 1.0 / layout[cell].rate;

    track.estimates.resize(reps, kNaN);
    track.normalized_errors.resize(reps, kNaN);
    std::vector<double> good;
    good.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const double value = table[r * cells + cell];
      if (std::isnan(value)) {
        ++track.failures;
        continue;
      }
      track.estimates[r] = value;
      track.normalized_errors[r] = (value - track.truth) * layout[cell].rate;
      good.push_back(value);
    }
    summary.failures += track.failures;

    const stats::Moments m = stats::moments(good);
    track.sample_mean = m.count > 0 ? m.mean : kNaN;
    track.sample_sd = m.count > 1 ? m.sd : kNaN;

    const std::vector<double> errors = track.successes();
    if (errors.size() >= 10) {
      const NormalityDiagnostics diag = normality_diagnostics(errors);
      track.ks = diag.ks;
      track.qq = diag.qq;
    } else {
      track.ks = kNaN;
    }

    track.histogram.assign(50, 0);
    for (double e : errors) {
      const double pos = (e - track.hist_lo) / (track.hist_hi - track.hist_lo) * 50.0;
      const int bin = std::clamp(static_cast<int>(pos), 0, 49);
      ++track.histogram[static_cast<std::size_t>(bin)];
    }
    summary.tracks.push_back(std::move(track));
  }

  const double total_calls = static_cast<double>(reps * cells);
  if (static_cast<double>(summary.failures) > 0.01 * total_calls)
    throw CampaignError("campaign: estimator failure rate exceeds 1%");
  return summary;
}

NormalityDiagnostics normality_diagnostics(const std::vector<double>& errors) {
  if (errors.size() < 10)
    throw std::invalid_argument("normality_diagnostics: needs at least 10 values");
  NormalityDiagnostics diag;
  diag.ks = stats::ks_statistic_normal(errors);
  diag.moments = stats::moments(errors);

  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  diag.qq.reserve(99);
  for (int i = 1; i <= 99; ++i) {
    const double level = static_cast<double>(i) / 100.0;
    diag.qq.push_back({level, stats::normal_quantile(level), stats::quantile_sorted(sorted, level)});
  }
  return diag;
}

}  // namespace sonde
