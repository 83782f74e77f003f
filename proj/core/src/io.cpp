#include "sonde/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sonde::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  cells.push_back(current);
  return cells;
}

double parse_cell(const std::string& cell, const std::string& file) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw std::invalid_argument(file + ": bad numeric cell '" + cell + "'");
  return v;
}

std::string cell_or_empty(double v) { return std::isnan(v) ? std::string{} : format_full(v); }

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_short: conversion failed");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) { return fnv1a64(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_path_csv(const FourierPath& path, const std::string& file) {
  std::ostringstream out;
  out << "mode,mu,nu,q,p,u0,xi";
  for (double t : path.times) out << ",u:" << format_short(t);
  out << "\n";
  for (int k = 1; k <= path.mode_count(); ++k) {
    const ModelSpec& model = path.model;
    out << k << ',' << format_full(model.mu_k(k)) << ',' << format_full(model.nu_k(k)) << ','
        << format_full(model.q_k(k)) << ',' << format_full(model.p_k(k)) << ','
        << format_full(model.initial_coefficient(k)) << ','
        << format_full(path.xi[static_cast<std::size_t>(k - 1)]);
    for (std::size_t j = 0; j < path.grid_size(); ++j) out << ',' << format_full(path.value(k, j));
    out << "\n";
  }
  write_text_file(file, out.str());
}

void write_path_sidecar(const FourierPath& path, std::uint64_t model_hash,
                        const std::string& file) {
  nlohmann::json j;
  j["seed"] = path.seed;
  j["replication"] = path.replication;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(model_hash));
  j["model_hash"] = hex;
  j["noise"] = to_string(path.model.noise);
  j["modes"] = path.mode_count();
  j["grid"] = path.times;
  write_text_file(file, j.dump(2) + "\n");
}

std::size_t PathTable::time_index(double t) const {
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (std::fabs(times[j] - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return j;
  }
  throw std::invalid_argument("PathTable: time not on grid");
}

PathTable read_path_csv(const std::string& file) {
  std::istringstream in(read_text_file(file));
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(file + ": empty path file");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 8 || header[0] != "mode")
    throw std::invalid_argument(file + ": not a path file");

  PathTable table;
  std::size_t first_time_col = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("u:", 0) == 0) {
      if (first_time_col == 0) first_time_col = c;
      table.times.push_back(parse_cell(header[c].substr(2), file));
    }
  }
  if (first_time_col != 7)
    throw std::invalid_argument(file + ": unexpected path column layout");

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument(file + ": ragged row in path file");
    table.mu.push_back(parse_cell(cells[1], file));
    table.nu.push_back(parse_cell(cells[2], file));
    table.q.push_back(parse_cell(cells[3], file));
    table.p.push_back(parse_cell(cells[4], file));
    table.u0.push_back(parse_cell(cells[5], file));
    table.xi.push_back(parse_cell(cells[6], file));
    std::vector<double> row;
    row.reserve(table.times.size());
    for (std::size_t c = first_time_col; c < cells.size(); ++c)
      row.push_back(parse_cell(cells[c], file));
    table.u.push_back(std::move(row));
  }
  if (table.u.empty()) throw std::invalid_argument(file + ": path file has no modes");
  return table;
}

void write_field_csv(const FieldSample& field, const std::string& file) {
  std::ostringstream out;
  out << "x";
  if (!field.u.empty()) out << ",u";
  if (!field.ux.empty()) out << ",ux";
  out << "\n";
  for (std::size_t j = 0; j < field.x.size(); ++j) {
    out << format_full(field.x[j]);
    if (!field.u.empty()) out << ',' << format_full(field.u[j]);
    if (!field.ux.empty()) out << ',' << format_full(field.ux[j]);
    out << "\n";
  }
  write_text_file(file, out.str());
}

void write_field_sidecar(const FieldSample& field, std::uint64_t model_hash,
                         const std::string& file) {
  nlohmann::json j;
  j["seed"] = field.seed;
  j["replication"] = field.replication;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(model_hash));
  j["model_hash"] = hex;
  j["time"] = field.time;
  j["truncation"] = field.truncation;
  j["tail_bound"] = field.tail_bound;
  j["points"] = field.x.size();
  write_text_file(file, j.dump(2) + "\n");
}

FieldTable read_field_csv(const std::string& file) {
  std::istringstream in(read_text_file(file));
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(file + ": empty field file");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "x") throw std::invalid_argument(file + ": not a field file");
  int u_col = -1, ux_col = -1;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "u") u_col = static_cast<int>(c);
    if (header[c] == "ux") ux_col = static_cast<int>(c);
  }
  FieldTable table;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument(file + ": ragged row in field file");
    table.x.push_back(parse_cell(cells[0], file));
    if (u_col >= 0) table.u.push_back(parse_cell(cells[static_cast<std::size_t>(u_col)], file));
    if (ux_col >= 0) table.ux.push_back(parse_cell(cells[static_cast<std::size_t>(ux_col)], file));
  }
  return table;
}

void write_campaign_summary_csv(const CampaignSummary& summary, const std::string& file) {
  std::ostringstream out;
  out << "modes,estimator,truth,mean,sd,theoretical_sd,ks,failures\n";
  for (const auto& track : summary.tracks) {
    out << track.modes << ',' << track.name << ',' << format_full(track.truth) << ','
        << cell_or_empty(track.sample_mean) << ',' << cell_or_empty(track.sample_sd) << ','
        << format_full(track.theoretical_sd) << ',' << cell_or_empty(track.ks) << ','
        << track.failures << "\n";
  }
  write_text_file(file, out.str());
}

void write_campaign_errors_csv(const CampaignSummary& summary, int modes,
                               const std::string& file) {
  std::vector<const EstimatorTrack*> tracks;
  for (const auto& track : summary.tracks) {
    if (track.modes == modes) tracks.push_back(&track);
  }
  if (tracks.empty()) throw std::invalid_argument("write_campaign_errors_csv: no such mode count");

  std::ostringstream out;
  out << "replication";
  for (const auto* track : tracks) out << ',' << track->name;
  out << "\n";
  for (int r = 0; r < summary.replications; ++r) {
    out << r;
    for (const auto* track : tracks)
      out << ',' << cell_or_empty(track->normalized_errors[static_cast<std::size_t>(r)]);
    out << "\n";
  }
  write_text_file(file, out.str());
}

void write_campaign_qq_csv(const CampaignSummary& summary, int modes, const std::string& file) {
  std::vector<const EstimatorTrack*> tracks;
  for (const auto& track : summary.tracks) {
    if (track.modes == modes) tracks.push_back(&track);
  }
  if (tracks.empty()) throw std::invalid_argument("write_campaign_qq_csv: no such mode count");

  std::ostringstream out;
  out << "level,normal";
  for (const auto* track : tracks) out << ',' << track->name;
  out << "\n";
  const std::size_t rows = tracks.front()->qq.size();
  for (std::size_t i = 0; i < rows; ++i) {
    out << format_short(tracks.front()->qq[i].level) << ','
        << format_full(tracks.front()->qq[i].theoretical);
    for (const auto* track : tracks)
      out << ',' << (track->qq.size() == rows ? format_full(track->qq[i].empirical) : std::string{});
    out << "\n";
  }
  write_text_file(file, out.str());
}

void write_manifest(const Manifest& manifest, const std::string& directory) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["config_hash"] = manifest.config_hash;
  j["base_seed"] = manifest.base_seed;
  j["created_utc"] = manifest.created_utc;
  nlohmann::json outputs = nlohmann::json::array();
  for (const std::string& name : manifest.outputs) {
    const std::string full = directory + "/" + name;
    nlohmann::json entry;
    entry["file"] = name;
    entry["bytes"] = std::filesystem::file_size(full);
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(full)));
    entry["fnv64"] = hex;
    outputs.push_back(entry);
  }
  j["outputs"] = outputs;
  write_text_file(directory + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace sonde::io
