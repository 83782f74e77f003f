#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sonde/montecarlo.hpp"
#include "sonde/simulate.hpp"

namespace sonde::io {

/// 17 significant digits; round-trips every finite double (CSV cells).
std::string format_full(double v);
/// Shortest round-trip representation (headers, config files).
std::string format_short(double v);

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// ---- Fourier path files -------------------------------------------------
//
// path.csv: one row per mode, columns
//   mode,mu,nu,q,p,u0,xi,u:<t0>,u:<t1>,...
// with a JSON sidecar <stem>.json carrying seed, replication, model hash and
// the grid.

void write_path_csv(const FourierPath& path, const std::string& file);
void write_path_sidecar(const FourierPath& path, std::uint64_t model_hash,
                        const std::string& file);

/// Per-mode view of a path file; enough to rebuild every Fourier-domain
/// estimator input without the original config.
struct PathTable {
  std::vector<double> times;
  std::vector<double> mu, nu, q, p, u0, xi;
  std::vector<std::vector<double>> u;  // [mode][time]

  int modes() const { return static_cast<int>(u0.size()); }
  std::size_t time_index(double t) const;
};

PathTable read_path_csv(const std::string& file);

// ---- Field files ---------------------------------------------------------
//
// field.csv: one row per space point, columns x[,u][,ux].

void write_field_csv(const FieldSample& field, const std::string& file);
void write_field_sidecar(const FieldSample& field, std::uint64_t model_hash,
                         const std::string& file);

struct FieldTable {
  std::vector<double> x;
  std::vector<double> u;   // empty if the column is absent
  std::vector<double> ux;  // empty if the column is absent
};

FieldTable read_field_csv(const std::string& file);

// ---- Campaign outputs ----------------------------------------------------

void write_campaign_summary_csv(const CampaignSummary& summary, const std::string& file);
void write_campaign_errors_csv(const CampaignSummary& summary, int modes, const std::string& file);
void write_campaign_qq_csv(const CampaignSummary& summary, int modes, const std::string& file);

// ---- Run manifest ----------------------------------------------------------

struct Manifest {
  std::string version;
  std::string config_hash;
  std::uint64_t base_seed = 0;
  std::string created_utc;
  std::vector<std::string> outputs;  // file names inside the run directory
};

/// Writes manifest.json listing every output with size and content hash.
/// Timestamps are the only non-deterministic content in a run directory.
void write_manifest(const Manifest& manifest, const std::string& directory);

}  // namespace sonde::io
