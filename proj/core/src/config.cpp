#include "sonde/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "sonde/io.hpp"

namespace sonde {

namespace {

struct Value {
  enum class Type { number, string, boolean, number_list, string_list };
  Type type = Type::number;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<double> numbers;
  std::vector<std::string> texts;
  int line = 0;
};

using Table = std::map<std::string, Value>;

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  return true;
}

double parse_number(const std::string& s, const std::string& file, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError(file, line, "expected a number, got '" + s + "'");
  return v;
}

Value parse_value(const std::string& raw, const std::string& file, int line) {
  Value v;
  v.line = line;
  if (raw.empty()) throw ConfigError(file, line, "missing value");

  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw ConfigError(file, line, "unterminated string");
    v.type = Value::Type::string;
    v.text = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.type = Value::Type::boolean;
    v.flag = raw == "true";
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError(file, line, "unterminated array");
    const std::string inner = trim(std::string_view(raw).substr(1, raw.size() - 2));
    std::vector<std::string> parts;
    std::string current;
    for (char c : inner) {
      if (c == ',') {
        parts.push_back(trim(current));
        current.clear();
      } else {
        current += c;
      }
    }
    if (!trim(current).empty()) parts.push_back(trim(current));
    const bool strings = !parts.empty() && parts.front().size() > 0 && parts.front()[0] == '"';
    if (strings) {
      v.type = Value::Type::string_list;
      for (const auto& part : parts) {
        if (part.size() < 2 || part.front() != '"' || part.back() != '"')
          throw ConfigError(file, line, "malformed string array element '" + part + "'");
        v.texts.push_back(part.substr(1, part.size() - 2));
      }
    } else {
      v.type = Value::Type::number_list;
      for (const auto& part : parts) v.numbers.push_back(parse_number(part, file, line));
    }
    return v;
  }
  v.type = Value::Type::number;
  v.number = parse_number(raw, file, line);
  return v;
}

Table tokenize(const std::string& text, const std::string& file) {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments outside quotes
    bool quoted = false;
    std::string body;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      body += c;
    }
    body = trim(body);
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(file, line_no, "unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (!valid_key(section)) throw ConfigError(file, line_no, "bad section name '" + section + "'");
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(file, line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (!valid_key(key) || key.find('.') != std::string::npos)
      throw ConfigError(file, line_no, "bad key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (table.count(full) != 0) throw ConfigError(file, line_no, "duplicate key '" + full + "'");
    table[full] = parse_value(trim(std::string_view(body).substr(eq + 1)), file, line_no);
  }
  return table;
}

// tracks which keys were consumed so typos surface as errors
struct Reader {
  const Table& table;
  const std::string& file;
  mutable std::set<std::string> used;

  const Value* find(const std::string& key) const {
    const auto it = table.find(key);
    if (it == table.end()) return nullptr;
    used.insert(key);
    return &it->second;
  }
  const Value& require(const std::string& key) const {
    const Value* v = find(key);
    if (v == nullptr) throw ConfigError(file + ": missing required key '" + key + "'");
    return *v;
  }
  double number(const std::string& key) const {
    const Value& v = require(key);
    if (v.type != Value::Type::number)
      throw ConfigError(file, v.line, "'" + key + "' must be a number");
    return v.number;
  }
  double number_or(const std::string& key, double fallback) const {
    return find(key) ? number(key) : fallback;
  }
  int integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v)) throw ConfigError(file + ": '" + key + "' must be an integer");
    return static_cast<int>(v);
  }
  int integer_or(const std::string& key, int fallback) const {
    return find(key) ? integer(key) : fallback;
  }
  std::string string(const std::string& key) const {
    const Value& v = require(key);
    if (v.type != Value::Type::string)
      throw ConfigError(file, v.line, "'" + key + "' must be a string");
    return v.text;
  }
  std::vector<double> number_list(const std::string& key) const {
    const Value& v = require(key);
    if (v.type != Value::Type::number_list)
      throw ConfigError(file, v.line, "'" + key + "' must be an array of numbers");
    return v.numbers;
  }
  std::vector<std::string> string_list(const std::string& key) const {
    const Value& v = require(key);
    if (v.type != Value::Type::string_list)
      throw ConfigError(file, v.line, "'" + key + "' must be an array of strings");
    return v.texts;
  }
  bool has_section(const std::string& prefix) const {
    const auto it = table.lower_bound(prefix + ".");
    return it != table.end() && it->first.rfind(prefix + ".", 0) == 0;
  }
  void finish() const {
    for (const auto& [key, value] : table) {
      if (used.count(key) == 0)
        throw ConfigError(file, value.line, "unknown key '" + key + "'");
    }
  }
};

CoefficientFamily family_from(const Reader& reader, const std::string& prefix) {
  const std::string kind = reader.string(prefix + ".kind");
  if (kind == "zero") return CoefficientFamily::zero_family();
  if (kind == "constant") return CoefficientFamily::constant(reader.number(prefix + ".c"));
  if (kind == "power")
    return CoefficientFamily::power(reader.number(prefix + ".c"), reader.number(prefix + ".r"));
  if (kind == "power_log")
    return CoefficientFamily::power_log(reader.number(prefix + ".c"), reader.number(prefix + ".r"),
                                        reader.number(prefix + ".s"));
  if (kind == "exp_decay")
    return CoefficientFamily::exponential_decay(reader.number(prefix + ".c"));
  if (kind == "explicit")
    return CoefficientFamily::explicit_list(reader.number_list(prefix + ".values"));
  throw ConfigError(reader.file + ": unknown family kind '" + kind + "' at " + prefix);
}

InitialCondition initial_from(const Reader& reader) {
  if (!reader.has_section("model.initial")) return InitialCondition::zero();
  const std::string kind = reader.string("model.initial.kind");
  if (kind == "zero") return InitialCondition::zero();
  if (kind == "constant") return InitialCondition::constant(reader.number("model.initial.value"));
  if (kind == "parabola") return InitialCondition::parabola();
  if (kind == "explicit")
    return InitialCondition::explicit_list(reader.number_list("model.initial.values"));
  throw ConfigError(reader.file + ": unknown initial-condition kind '" + kind + "'");
}

void family_to(std::ostringstream& out, const std::string& section,
               const CoefficientFamily& family) {
  out << "[" << section << "]\n";
  switch (family.kind()) {
    case CoefficientFamily::Kind::zero:
      out << "kind = \"zero\"\n";
      break;
    case CoefficientFamily::Kind::constant:
      out << "kind = \"constant\"\n";
      out << "c = " << io::format_short(family.param_c()) << "\n";
      break;
    case CoefficientFamily::Kind::power:
      out << "kind = \"power\"\n";
      out << "c = " << io::format_short(family.param_c()) << "\n";
      out << "r = " << io::format_short(family.param_r()) << "\n";
      break;
    case CoefficientFamily::Kind::power_log:
      out << "kind = \"power_log\"\n";
      out << "c = " << io::format_short(family.param_c()) << "\n";
      out << "r = " << io::format_short(family.param_r()) << "\n";
      out << "s = " << io::format_short(family.param_s()) << "\n";
      break;
    case CoefficientFamily::Kind::exponential_decay:
      out << "kind = \"exp_decay\"\n";
      out << "c = " << io::format_short(family.param_c()) << "\n";
      break;
    case CoefficientFamily::Kind::explicit_list: {
      out << "kind = \"explicit\"\n";
      out << "values = [";
      const auto& values = family.values();
      for (std::size_t i = 0; i < values.size(); ++i)
        out << (i == 0 ? "" : ", ") << io::format_short(values[i]);
      out << "]\n";
      break;
    }
  }
  out << "\n";
}

}  // namespace

CampaignConfig RunConfig::campaign(std::uint64_t effective_seed, int worker_override,
                                   bool force) const {
  CampaignConfig cfg;
  cfg.model = model;
  cfg.replications = replications;
  cfg.sweep = sweep;
  cfg.estimators = estimators;
  cfg.seed = effective_seed;
  cfg.workers = worker_override > 0 ? worker_override : workers;
  cfg.force = force;
  return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& filename) {
  const Table table = tokenize(text, filename);
  const Reader reader{table, filename, {}};

  RunConfig config;
  ModelSpec& model = config.model;

  const std::string noise = reader.string("model.noise");
  if (noise == "shell") {
    model.noise = NoiseType::shell;
  } else if (noise == "additive") {
    model.noise = NoiseType::additive;
  } else {
    throw ConfigError(filename + ": model.noise must be \"shell\" or \"additive\"");
  }

  model.modes = reader.integer("model.modes");
  model.horizon = reader.number_or("model.horizon", 1.0);
  model.dt = reader.number_or("model.dt", 0.01);
  model.theta0 = reader.number("model.theta");
  model.sigma0 = reader.number("model.sigma");

  if (reader.has_section("model.operator")) {
    const double beta = reader.number("model.operator.beta");
    const int dimension = reader.integer_or("model.operator.dimension", 1);
    std::optional<double> beta0;
    if (model.noise == NoiseType::shell) beta0 = reader.number("model.operator.beta0");
    CoefficientFamily q = family_from(reader, "model.q");
    CoefficientFamily p = model.noise == NoiseType::shell && reader.has_section("model.p")
                              ? family_from(reader, "model.p")
                              : CoefficientFamily::zero_family();
    const ModelSpec generated =
        fractional_laplacian_model(model.noise, beta, beta0, dimension, std::move(q), std::move(p));
    model.mu = generated.mu;
    model.nu = generated.nu;
    model.q = generated.q;
    model.p = generated.p;
    model.basis = generated.basis;
  } else {
    model.mu = family_from(reader, "model.mu");
    model.nu = model.noise == NoiseType::shell ? family_from(reader, "model.nu")
                                               : CoefficientFamily::zero_family();
    model.q = family_from(reader, "model.q");
    model.p = model.noise == NoiseType::shell && reader.has_section("model.p")
                  ? family_from(reader, "model.p")
                  : CoefficientFamily::zero_family();
  }

  model.initial = initial_from(reader);

  model.box.theta_min = reader.number_or("box.theta_min", model.theta0 > 0 ? model.theta0 / 10.0
                                                                           : model.theta0 * 10.0);
  model.box.theta_max = reader.number_or("box.theta_max", model.theta0 > 0 ? model.theta0 * 10.0
                                                                           : model.theta0 / 10.0);
  model.box.sigma_min = reader.number_or("box.sigma_min", model.sigma0 / 10.0);
  model.box.sigma_max = reader.number_or("box.sigma_max", model.sigma0 * 10.0);

  config.replications = reader.integer_or("campaign.replications", 100);
  if (reader.find("campaign.sweep")) {
    for (double v : reader.number_list("campaign.sweep")) {
      if (v != std::floor(v)) throw ConfigError(filename + ": campaign.sweep must hold integers");
      config.sweep.push_back(static_cast<int>(v));
    }
  } else {
    config.sweep.push_back(model.modes);
  }
  if (reader.find("campaign.estimators")) {
    config.estimators = reader.string_list("campaign.estimators");
  } else {
    config.estimators.push_back(model.noise == NoiseType::shell ? "mle" : "sigma_fourier");
  }
  config.workers = reader.integer_or("campaign.workers", 1);
  if (reader.find("campaign.seed")) {
    const double s = reader.number("campaign.seed");
    if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15)
      throw ConfigError(filename + ": campaign.seed must be a nonnegative integer below 2^53");
    config.seed = static_cast<std::uint64_t>(s);
  }

  reader.finish();
  model.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  return parse_config(io::read_text_file(path), path);
}

std::string canonical_config(const RunConfig& config) {
  const ModelSpec& model = config.model;
  std::ostringstream out;
  out << "[model]\n";
  out << "noise = \"" << to_string(model.noise) << "\"\n";
  out << "modes = " << model.modes << "\n";
  out << "horizon = " << io::format_short(model.horizon) << "\n";
  out << "dt = " << io::format_short(model.dt) << "\n";
  out << "theta = " << io::format_short(model.theta0) << "\n";
  out << "sigma = " << io::format_short(model.sigma0) << "\n";
  out << "\n";
  family_to(out, "model.mu", model.mu);
  if (model.noise == NoiseType::shell) family_to(out, "model.nu", model.nu);
  family_to(out, "model.q", model.q);
  if (model.noise == NoiseType::shell) family_to(out, "model.p", model.p);

  out << "[model.initial]\n";
  switch (model.initial.kind) {
    case InitialCondition::Kind::zero:
      out << "kind = \"zero\"\n";
      break;
    case InitialCondition::Kind::constant:
      out << "kind = \"constant\"\n";
      out << "value = " << io::format_short(model.initial.value) << "\n";
      break;
    case InitialCondition::Kind::parabola:
      out << "kind = \"parabola\"\n";
      break;
    case InitialCondition::Kind::explicit_list: {
      out << "kind = \"explicit\"\n";
      out << "values = [";
      for (std::size_t i = 0; i < model.initial.values.size(); ++i)
        out << (i == 0 ? "" : ", ") << io::format_short(model.initial.values[i]);
      out << "]\n";
      break;
    }
  }
  out << "\n";

  out << "[box]\n";
  out << "theta_min = " << io::format_short(model.box.theta_min) << "\n";
  out << "theta_max = " << io::format_short(model.box.theta_max) << "\n";
  out << "sigma_min = " << io::format_short(model.box.sigma_min) << "\n";
  out << "sigma_max = " << io::format_short(model.box.sigma_max) << "\n";
  out << "\n";

  out << "[campaign]\n";
  out << "replications = " << config.replications << "\n";
  out << "sweep = [";
  for (std::size_t i = 0; i < config.sweep.size(); ++i)
    out << (i == 0 ? "" : ", ") << config.sweep[i];
  out << "]\n";
  out << "estimators = [";
  for (std::size_t i = 0; i < config.estimators.size(); ++i)
    out << (i == 0 ? "" : ", ") << "\"" << config.estimators[i] << "\"";
  out << "]\n";
  out << "workers = " << config.workers << "\n";
  if (config.seed.has_value()) out << "seed = " << *config.seed << "\n";
  return out.str();
}

std::uint64_t config_hash(const RunConfig& config) {
  return io::fnv1a64(canonical_config(config));
}

}  // namespace sonde
