#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sonde/montecarlo.hpp"

namespace sonde {

/// Error in a configuration file, anchored to its line.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), line_number(line) {}
  explicit ConfigError(const std::string& message) : std::runtime_error(message), line_number(0) {}
  int line_number;
};

/// Everything a run needs: the model plus campaign settings and an optional
/// default seed (flags and the SONDE_SEED environment variable override it).
struct RunConfig {
  ModelSpec model;
  int replications = 100;
  std::vector<int> sweep;
  std::vector<std::string> estimators;
  int workers = 1;
  std::optional<std::uint64_t> seed;

  CampaignConfig campaign(std::uint64_t effective_seed, int worker_override = 0,
                          bool force = false) const;
};

RunConfig parse_config(const std::string& text, const std::string& filename = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical serialization: fixed section and key order, shortest
/// round-trip number formatting. parse(canonical(x)) == x, and the
/// configuration hash is FNV-1a over this text.
std::string canonical_config(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

}  // namespace sonde
