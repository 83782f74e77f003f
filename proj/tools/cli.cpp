#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sonde/additive_inference.hpp"
#include "sonde/conditions.hpp"
#include "sonde/config.hpp"
#include "sonde/io.hpp"
#include "sonde/montecarlo.hpp"
#include "sonde/shell_inference.hpp"
#include "sonde/simulate.hpp"
#include "sonde/version.hpp"

namespace sonde::cli {

namespace {

namespace fs = std::filesystem;

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& config_default) {
  if (flag.has_value()) return *flag;
  if (const char* env = std::getenv("SONDE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw ConfigError("SONDE_SEED is not a valid nonnegative integer");
  }
  if (config_default.has_value()) return *config_default;
  return 0;
}

std::string resolve_out(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SONDE_OUT")) return std::string(env) + "/" + fallback;
  return fallback;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

void finish_manifest(const std::string& dir, std::uint64_t hash, std::uint64_t seed,
                     std::vector<std::string> outputs) {
  io::Manifest manifest;
  manifest.version = version_string;
  manifest.config_hash = hex64(hash);
  manifest.base_seed = seed;
  manifest.created_utc = utc_now();
  manifest.outputs = std::move(outputs);
  io::write_manifest(manifest, dir);
}

void print_condition_table(const ConditionReport& report, std::ostream& out) {
  out << "condition       verdict     method                 witness     diagnostic\n";
  for (const auto& row : report.rows) {
    char line[256];
    const std::string witness =
        std::isnan(row.witness)
            ? ""
            : (std::isinf(row.witness) ? "any" : io::format_short(row.witness));
    std::snprintf(line, sizeof(line), "%-15s %-11s %-22s %-11s %s", row.id.c_str(),
                  to_string(row.verdict).c_str(), to_string(row.method).c_str(), witness.c_str(),
                  row.diagnostic.c_str());
    out << line << "\n";
  }
}

void write_condition_csv(const ConditionReport& report, const std::string& file) {
  std::ostringstream out;
  out << "condition,verdict,method,witness,diagnostic\n";
  for (const auto& row : report.rows) {
    const std::string witness =
        std::isnan(row.witness)
            ? ""
            : (std::isinf(row.witness) ? "inf" : io::format_full(row.witness));
    std::string diag = row.diagnostic;
    for (char& c : diag) {
      if (c == ',') c = ';';
    }
    out << row.id << ',' << to_string(row.verdict) << ',' << to_string(row.method) << ','
        << witness << ',' << diag << "\n";
  }
  io::write_text_file(file, out.str());
}

int gate_conditions(const ModelSpec& model, bool force, std::ostream& err) {
  const ConditionReport report = check_model(model);
  if (report.any_undecided() && !force) {
    err << "error: condition checks are undecided (rerun with --force to override)\n";
    return kUndecidedError;
  }
  if (!required_conditions_hold(model, report) && !force) {
    err << "error: required conditions fail (rerun with --force to override)\n";
    return kConditionError;
  }
  return kOk;
}

// --------------------------------------------------------------------------

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
                 std::uint32_t replication, const std::string& out_flag, bool force,
                 bool want_field, double field_time, int field_k, double field_resolution) {
  const RunConfig config = load_config(config_path);
  const std::uint64_t seed = resolve_seed(seed_flag, config.seed);
  const std::string out = resolve_out(out_flag, "sonde-simulate");

  if (const int rc = gate_conditions(config.model, force, std::cerr); rc != kOk) return rc;

  ensure_directory(out);
  const FourierPath path = simulate(config.model, seed, replication);
  const std::uint64_t hash = config_hash(config);

  std::vector<std::string> outputs;
  io::write_path_csv(path, out + "/path.csv");
  io::write_path_sidecar(path, hash, out + "/path.json");
  outputs.push_back("path.csv");
  outputs.push_back("path.json");

  if (want_field) {
    FieldRequest request;
    request.time = field_time;
    request.truncation = field_k;
    request.resolution = field_resolution;
    const FieldSample field = reconstruct_field(path, request);
    io::write_field_csv(field, out + "/field.csv");
    io::write_field_sidecar(field, hash, out + "/field.json");
    outputs.push_back("field.csv");
    outputs.push_back("field.json");
  }
  const std::size_t file_count = outputs.size();
  finish_manifest(out, hash, seed, std::move(outputs));
  std::cout << "wrote " << file_count << " data files to " << out << " (seed " << seed
            << ", replication " << replication << ")\n";
  return kOk;
}

// --------------------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string method;
  std::string out;
  double t1 = 0.0, t2 = 0.0, t = 0.0;
  double theta = 0.0, sigma = 0.0;
  bool has_t1 = false, has_t2 = false, has_t = false, has_theta = false, has_sigma = false;
  double window_min = 0.0, window_max = 0.0;
  bool has_window = false;
  int modes = 0;  // 0: all
};

double first_positive_time(const io::PathTable& table) {
  for (double t : table.times) {
    if (t > 0.0) return t;
  }
  throw std::invalid_argument("estimate: path file has no positive time");
}

std::string sidecar_noise(const std::string& csv_path) {
  const fs::path p(csv_path);
  fs::path sidecar = p;
  sidecar.replace_extension(".json");
  if (!fs::exists(sidecar)) return "";
  const nlohmann::json j = nlohmann::json::parse(io::read_text_file(sidecar.string()));
  return j.value("noise", "");
}

ShellObservations shell_observations_from_table(const io::PathTable& table, int modes) {
  const int limit = modes == 0 ? table.modes() : modes;
  if (limit < 1 || limit > table.modes())
    throw std::invalid_argument("estimate: mode cutoff outside the file's range");
  std::size_t j0 = table.times.size();
  for (std::size_t j = 0; j < table.times.size(); ++j) {
    if (table.times[j] > 0.0) {
      j0 = j;
      break;
    }
  }
  if (j0 == table.times.size())
    throw std::invalid_argument("estimate: path file has no positive time");

  ShellObservations obs;
  obs.t = table.times[j0];
  obs.requested_modes = limit;
  for (int k = 1; k <= limit; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    if (table.u0[i] == 0.0) {
      ++obs.dropped_modes;
      continue;
    }
    const double ratio = table.u[i][j0] / table.u0[i];
    if (!(ratio > 0.0))
      throw std::invalid_argument("estimate: nonpositive trajectory ratio (not shell data?)");
    obs.y.push_back(std::log(ratio) / obs.t);
    obs.mu.push_back(table.mu[i]);
    obs.nu.push_back(table.nu[i]);
    obs.q.push_back(table.q[i]);
    obs.p.push_back(table.p[i]);
  }
  if (obs.y.empty()) throw std::invalid_argument("estimate: every mode in the file is dark");
  return obs;
}

void write_shell_estimate_csv(const EstimateReport& report, int modes, const std::string& file) {
  std::ostringstream out;
  out << "replication,modes,method,theta,sigma,se_theta,se_sigma,vartheta,se_vartheta,"
         "converged,degenerate,iterations,gradient_norm,note\n";
  out << 0 << ',' << modes << ',' << to_string(report.method) << ','
      << io::format_full(report.theta) << ',' << io::format_full(report.sigma) << ','
      << io::format_full(report.se_theta) << ',' << io::format_full(report.se_sigma) << ','
      << io::format_full(report.vartheta) << ',' << io::format_full(report.se_vartheta) << ','
      << (report.converged ? 1 : 0) << ',' << (report.degenerate_vartheta ? 1 : 0) << ','
      << report.iterations << ',' << io::format_full(report.gradient_norm) << ',' << report.note
      << "\n";
  io::write_text_file(file, out.str());
}

int cmd_estimate(const EstimateArgs& args) {
  const std::string out = resolve_out(args.out, "sonde-estimate");
  const std::string noise = sidecar_noise(args.input);
  std::vector<std::string> outputs;

  const auto check_model_kind = [&](const char* expected) {
    if (!noise.empty() && noise != expected)
      throw std::invalid_argument(std::string("estimate: method expects ") + expected +
                                  " data but the sidecar says " + noise);
  };

  ensure_directory(out);

  if (args.method == "mle" || args.method == "newton" || args.method == "bayes") {
    check_model_kind("shell");
    const io::PathTable table = io::read_path_csv(args.input);
    const ShellObservations obs = shell_observations_from_table(table, args.modes);
    EstimateReport report;
    if (args.method == "mle") {
      if (!obs.p_is_zero())
        throw std::invalid_argument("estimate: closed-form mle requires p == 0; use newton");
      report = mle_closed_form(obs);
    } else if (args.method == "newton") {
      report = mle_numeric(obs);
    } else {
      report = bayes_posterior_mean(obs);
    }
    if (!report.converged && report.method != EstimateMethod::closed_form) {
      std::cerr << "error: estimator did not converge: " << report.note << "\n";
      return kEstimatorError;
    }
    write_shell_estimate_csv(report, obs.requested_modes, out + "/estimates.csv");
    outputs.push_back("estimates.csv");
    std::cout << to_string(report.method) << ": theta " << io::format_short(report.theta)
              << " (se " << io::format_short(report.se_theta) << "), sigma "
              << io::format_short(report.sigma) << " (se " << io::format_short(report.se_sigma)
              << ")\n";
  } else if (args.method == "drift2" || args.method == "drift3") {
    check_model_kind("additive");
    const io::PathTable table = io::read_path_csv(args.input);
    const int limit = args.modes == 0 ? table.modes() : args.modes;
    // early grid times keep the relaxation factors of strongly damped modes
    // numerically resolvable
    const double earliest = first_positive_time(table);
    const double t1 = args.has_t1 ? args.t1 : earliest;
    const double t2 = args.has_t2 ? args.t2 : 2.0 * t1;
    const std::size_t j1 = table.time_index(t1);
    const std::size_t j2 = table.time_index(t2);
    const std::size_t jg = table.time_index(t2 - t1);

    std::ostringstream csv;
    csv << "mode,t1,t2,method,theta_mu,residual\n";
    for (int k = 1; k <= limit; ++k) {
      const std::size_t i = static_cast<std::size_t>(k - 1);
      IncrementObservations inc;
      inc.mode = k;
      inc.t1 = t1;
      inc.t2 = t2;
      inc.u_at_t1 = table.u[i][j1] - table.u0[i];
      inc.u_at_t2 = table.u[i][j2] - table.u0[i];
      inc.u_at_gap = table.u[i][jg] - table.u0[i];
      inc.has_gap_value = true;
      double drift = 0.0;
      double residual = 0.0;
      try {
        if (args.method == "drift2") {
          drift = recover_drift_two_point(inc);
          residual = two_point_residual(inc, drift);
        } else {
          drift = recover_drift_three_point(inc);
          residual = three_point_residual(inc, drift);
        }
      } catch (const std::exception& e) {
        std::cerr << "error: mode " << k << ": " << e.what() << "\n";
        return kEstimatorError;
      }
      csv << k << ',' << io::format_full(t1) << ',' << io::format_full(t2) << ',' << args.method
          << ',' << io::format_full(drift) << ',' << io::format_full(residual) << "\n";
    }
    io::write_text_file(out + "/estimates.csv", csv.str());
    outputs.push_back("estimates.csv");
    std::cout << args.method << ": recovered theta*mu for " << limit << " modes (t1 "
              << io::format_short(t1) << ", t2 " << io::format_short(t2) << ")\n";
  } else if (args.method == "sigma-fourier") {
    check_model_kind("additive");
    const io::PathTable table = io::read_path_csv(args.input);
    const int limit = args.modes == 0 ? table.modes() : args.modes;
    const double t = args.has_t ? args.t : table.times.back();

    std::vector<double> drift(static_cast<std::size_t>(limit));
    if (args.has_theta) {
      for (int k = 1; k <= limit; ++k)
        drift[static_cast<std::size_t>(k - 1)] = args.theta * table.mu[static_cast<std::size_t>(k - 1)];
    } else {
      // recover theta*mu_k exactly from three early grid times
      const double t1 = args.has_t1 ? args.t1 : first_positive_time(table);
      const double t2 = args.has_t2 ? args.t2 : 2.0 * t1;
      const std::size_t j1 = table.time_index(t1);
      const std::size_t j2 = table.time_index(t2);
      const std::size_t jg = table.time_index(t2 - t1);
      for (int k = 1; k <= limit; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        IncrementObservations inc;
        inc.mode = k;
        inc.t1 = t1;
        inc.t2 = t2;
        inc.u_at_t1 = table.u[i][j1] - table.u0[i];
        inc.u_at_t2 = table.u[i][j2] - table.u0[i];
        inc.u_at_gap = table.u[i][jg] - table.u0[i];
        inc.has_gap_value = true;
        try {
          drift[i] = recover_drift_three_point(inc);
        } catch (const std::exception& e) {
          std::cerr << "error: drift recovery failed at mode " << k << ": " << e.what()
                    << " (pass --theta to use a known value)\n";
          return kEstimatorError;
        }
      }
    }

    // X_k = theta mu_k U_k(t) / (q_k S_k(t)), then the variance MLE
    const std::size_t jt = table.time_index(t);
    double acc = 0.0;
    for (int k = 1; k <= limit; ++k) {
      const std::size_t i = static_cast<std::size_t>(k - 1);
      const double relax = -std::expm1(-drift[i] * t);
      const double x = drift[i] * (table.u[i][jt] - table.u0[i]) / (table.q[i] * relax);
      acc += x * x;
    }
    const double vartheta = acc / static_cast<double>(limit);
    const double sigma = std::sqrt(vartheta);
    const double se_vt = std::sqrt(2.0 / static_cast<double>(limit)) * vartheta;
    const double se_sigma = sigma / std::sqrt(2.0 * static_cast<double>(limit));

    std::ostringstream csv;
    csv << "modes,t,method,vartheta,se_vartheta,sigma,se_sigma\n";
    csv << limit << ',' << io::format_full(t) << ",sigma-fourier," << io::format_full(vartheta)
        << ',' << io::format_full(se_vt) << ',' << io::format_full(sigma) << ','
        << io::format_full(se_sigma) << "\n";
    io::write_text_file(out + "/estimates.csv", csv.str());
    outputs.push_back("estimates.csv");
    std::cout << "sigma-fourier: sigma " << io::format_short(sigma) << " (se "
              << io::format_short(se_sigma) << ") from " << limit << " modes\n";
  } else if (args.method == "qv" || args.method == "qv-fd") {
    if (args.has_theta == args.has_sigma)
      throw std::invalid_argument("estimate: qv methods need exactly one of --theta / --sigma");
    const io::FieldTable table = io::read_field_csv(args.input);
    const bool fd = args.method == "qv-fd";
    FieldSample field;
    field.x = table.x;
    field.u = table.u;
    field.ux = table.ux;
    const double a = args.has_window ? args.window_min : field.x.front();
    const double b = args.has_window ? args.window_max : field.x.back();
    const SpatialIncrements samples = SpatialIncrements::from_field(field, !fd, a, b);

    QvEstimate est;
    try {
      if (fd) {
        est = args.has_sigma ? quad_var_theta_fd(samples, args.sigma)
                             : quad_var_sigma_fd(samples, args.theta);
      } else {
        est = args.has_sigma ? quad_var_theta(samples, args.sigma)
                             : quad_var_sigma(samples, args.theta);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kEstimatorError;
    }
    if (est.degenerate) {
      std::cerr << "error: degenerate quadratic sum (constant samples)\n";
      return kEstimatorError;
    }

    std::ostringstream csv;
    csv << "method,target,estimate,se,increments,window_a,window_b,quadratic_sum,experimental\n";
    csv << args.method << ','
        << (est.target == QvEstimate::Target::theta_sq ? "theta_sq" : "sigma_sq") << ','
        << io::format_full(est.estimate) << ',' << io::format_full(est.se) << ','
        << est.increments << ',' << io::format_full(a) << ',' << io::format_full(b) << ','
        << io::format_full(est.quadratic_sum) << ',' << (est.experimental ? 1 : 0) << "\n";
    io::write_text_file(out + "/estimates.csv", csv.str());
    outputs.push_back("estimates.csv");
    std::cout << args.method << ": "
              << (est.target == QvEstimate::Target::theta_sq ? "theta^2 " : "sigma^2 ")
              << io::format_short(est.estimate) << " (se " << io::format_short(est.se) << ", M="
              << est.increments << ")\n";
  } else {
    throw std::invalid_argument("estimate: unknown method '" + args.method + "'");
  }

  finish_manifest(out, io::fnv1a64_file(args.input), 0, std::move(outputs));
  return kOk;
}

// --------------------------------------------------------------------------

int cmd_check(const std::string& config_path, const std::string& csv_path) {
  const RunConfig config = load_config(config_path);
  const ConditionReport report = check_model(config.model);
  print_condition_table(report, std::cout);
  if (!csv_path.empty()) write_condition_csv(report, csv_path);
  if (report.any_undecided()) return kUndecidedError;
  return required_conditions_hold(config.model, report) ? kOk : kConditionError;
}

// --------------------------------------------------------------------------

int cmd_campaign(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
                 int replications_flag, int workers_flag, const std::string& out_flag,
                 bool force) {
  RunConfig config = load_config(config_path);
  if (replications_flag > 0) config.replications = replications_flag;
  const std::uint64_t seed = resolve_seed(seed_flag, config.seed);
  const std::string out = resolve_out(out_flag, "sonde-campaign");

  CampaignConfig cfg = config.campaign(seed, workers_flag, force);
  CampaignSummary summary;
  try {
    summary = run_campaign(cfg);
  } catch (const ConditionGateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::string(e.what()).find("undecided") != std::string::npos ? kUndecidedError
                                                                        : kConditionError;
  } catch (const CampaignError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEstimatorError;
  }

  ensure_directory(out);
  std::vector<std::string> outputs;
  io::write_campaign_summary_csv(summary, out + "/summary.csv");
  outputs.push_back("summary.csv");
  for (int n : cfg.sweep) {
    const std::string errors_name = "errors_N" + std::to_string(n) + ".csv";
    const std::string qq_name = "qq_N" + std::to_string(n) + ".csv";
    io::write_campaign_errors_csv(summary, n, out + "/" + errors_name);
    outputs.push_back(errors_name);
    if (summary.replications >= 10) {
      io::write_campaign_qq_csv(summary, n, out + "/" + qq_name);
      outputs.push_back(qq_name);
    }
  }

  nlohmann::json echo;
  echo["version"] = version_string;
  echo["seed"] = seed;
  echo["replications"] = cfg.replications;
  echo["workers"] = cfg.workers;
  echo["failures"] = summary.failures;
  echo["config_hash"] = hex64(config_hash(config));
  echo["config"] = canonical_config(config);
  io::write_text_file(out + "/campaign.json", echo.dump(2) + "\n");
  outputs.push_back("campaign.json");

  finish_manifest(out, config_hash(config), seed, std::move(outputs));

  std::cout << "campaign complete: " << cfg.replications << " replications, "
            << summary.tracks.size() << " tracks, " << summary.failures << " failures -> " << out
            << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"simulation and inference toolkit for evolution equations with space-only noise"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate Fourier-mode paths from a config");
  std::string sim_config;
  std::optional<std::uint64_t> sim_seed;
  std::uint32_t sim_replication = 0;
  std::string sim_out;
  bool sim_force = false;
  bool sim_field = false;
  double sim_field_time = 0.2;
  int sim_field_k = 30000;
  double sim_field_res = 0.0015;
  sim->add_option("config", sim_config, "model config file")->required();
  sim->add_option("--seed", sim_seed, "base RNG seed (overrides SONDE_SEED)");
  sim->add_option("--replication", sim_replication, "replication index");
  sim->add_option("--out", sim_out, "output directory");
  sim->add_flag("--force", sim_force, "simulate even when conditions fail");
  sim->add_flag("--field", sim_field, "also reconstruct the physical-space field (additive only)");
  sim->add_option("--field-time", sim_field_time, "field reconstruction time");
  sim->add_option("--field-k", sim_field_k, "series truncation for the field");
  sim->add_option("--field-resolution", sim_field_res, "spatial grid step for the field");

  // estimate
  auto* est = app.add_subcommand("estimate", "run an estimator on exported data files");
  EstimateArgs est_args;
  est->add_option("input", est_args.input, "path.csv or field.csv produced by simulate")
      ->required();
  est->add_option("--method", est_args.method,
                  "mle|newton|bayes|drift2|drift3|sigma-fourier|qv|qv-fd")
      ->required();
  est->add_option("--out", est_args.out, "output directory");
  est->add_option("--modes", est_args.modes, "use only the first N modes");
  auto* opt_t1 = est->add_option("--t1", est_args.t1, "first observation time");
  auto* opt_t2 = est->add_option("--t2", est_args.t2, "second observation time");
  auto* opt_t = est->add_option("--t", est_args.t, "observation time for sigma-fourier");
  auto* opt_theta = est->add_option("--theta", est_args.theta, "known drift parameter");
  auto* opt_sigma = est->add_option("--sigma", est_args.sigma, "known noise parameter");
  auto* opt_wmin = est->add_option("--window-min", est_args.window_min, "spatial window start");
  auto* opt_wmax = est->add_option("--window-max", est_args.window_max, "spatial window end");

  // check
  auto* chk = app.add_subcommand("check", "decide well-posedness and regularity conditions");
  std::string chk_config;
  std::string chk_csv;
  chk->add_option("config", chk_config, "model config file")->required();
  chk->add_option("--csv", chk_csv, "also write the table to this CSV file");

  // campaign
  auto* camp = app.add_subcommand("campaign", "run a replicated simulate/estimate campaign");
  std::string camp_config;
  std::optional<std::uint64_t> camp_seed;
  int camp_replications = 0;
  int camp_workers = 0;
  std::string camp_out;
  bool camp_force = false;
  camp->add_option("config", camp_config, "model config file")->required();
  camp->add_option("--seed", camp_seed, "base RNG seed (overrides SONDE_SEED)");
  camp->add_option("--replications", camp_replications, "override the configured replication count");
  camp->add_option("--workers", camp_workers, "worker thread count");
  camp->add_option("--out", camp_out, "output directory");
  camp->add_flag("--force", camp_force, "run even when conditions fail");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << version_string << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_config, sim_seed, sim_replication, sim_out, sim_force, sim_field,
                          sim_field_time, sim_field_k, sim_field_res);
    }
    if (est->parsed()) {
      est_args.has_t1 = opt_t1->count() > 0;
      est_args.has_t2 = opt_t2->count() > 0;
      est_args.has_t = opt_t->count() > 0;
      est_args.has_theta = opt_theta->count() > 0;
      est_args.has_sigma = opt_sigma->count() > 0;
      est_args.has_window = opt_wmin->count() > 0 || opt_wmax->count() > 0;
      if (est_args.has_window && (opt_wmin->count() == 0 || opt_wmax->count() == 0))
        throw std::invalid_argument("estimate: --window-min and --window-max come together");
      return cmd_estimate(est_args);
    }
    if (chk->parsed()) return cmd_check(chk_config, chk_csv);
    if (camp->parsed())
      return cmd_campaign(camp_config, camp_seed, camp_replications, camp_workers, camp_out,
                          camp_force);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEstimatorError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kConfigError;
}

}  // namespace sonde::cli
