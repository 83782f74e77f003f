#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonde/model.hpp"
#include "sonde/stats.hpp"

namespace sonde {

/// Replicated simulate-then-estimate campaign over a sweep of mode counts.
///
/// Each replication r simulates one path with the counter-based stream at
/// (seed, r) and runs the selected estimators at every mode count in the
/// sweep. Replications are independent tasks; the aggregation is a fold in
/// replication order, so the summary is bit-identical for any worker count.
struct CampaignConfig {
  ModelSpec model;
  int replications = 100;
  std::vector<int> sweep;               // increasing mode counts, each <= model.modes
  std::vector<std::string> estimators;  // shell: "mle", "bayes"; additive: "sigma_fourier"
  std::uint64_t seed = 0;
  int workers = 1;
  bool force = false;  // skip the condition gate

  void validate() const;
};

struct QuantilePair {
  double level = 0.0;        // probability level
  double theoretical = 0.0;  // standard normal quantile
  double empirical = 0.0;    // sample quantile of the normalized errors
};

/// Aggregates for one (mode count, estimator coordinate) cell.
struct EstimatorTrack {
  int modes = 0;
  std::string name;    // theta_mle, sigma_mle, theta_bayes, sigma_bayes,
                       // vartheta_fourier, sigma_fourier
  double truth = 0.0;
  double sample_mean = 0.0;
  double sample_sd = 0.0;       // NaN when fewer than two successes
  double theoretical_sd = 0.0;  // Fisher or limit-law standard deviation
  double ks = 0.0;              // KS of normalized errors vs standard normal; NaN if < 10
  int failures = 0;

  // both aligned to replication index (length M); NaN marks a failure
  std::vector<double> estimates;
  std::vector<double> normalized_errors;

  /// Normalized errors with the failure holes removed.
  std::vector<double> successes() const;
  std::vector<QuantilePair> qq;           // 99 evenly spaced levels
  std::vector<int> histogram;             // counts over [hist_lo, hist_hi]
  double hist_lo = -5.0;
  double hist_hi = 5.0;
};

struct CampaignSummary {
  std::uint64_t seed = 0;
  int replications = 0;
  int failures = 0;
  std::vector<EstimatorTrack> tracks;

  const EstimatorTrack* find(const std::string& name, int modes) const;
};

/// Runs the campaign. Verifies the model's conditions first and throws
/// ConditionGateError unless cfg.force; throws CampaignError if the overall
/// estimator failure rate exceeds 1%.
CampaignSummary run_campaign(const CampaignConfig& cfg);

struct ConditionGateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CampaignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NormalityDiagnostics {
  double ks = 0.0;
  std::vector<QuantilePair> qq;
  stats::Moments moments;
};

/// KS distance to the standard normal, 99 quantile pairs and the first four
/// sample moments. Requires at least 10 values.
NormalityDiagnostics normality_diagnostics(const std::vector<double>& errors);

}  // namespace sonde
