#include "escape_lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "escape_lab/errors.hpp"

namespace escape_lab {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(key, "must be finite");
  return x;
}

std::uint64_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad(key, "expected a non-negative integer");
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const auto x = j.get<std::int64_t>();
  if (x < 0) bad(key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(x);
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
  if (j.is_number()) return {get_number(j, key)};
  if (!j.is_array()) bad(key, "expected a number or an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_number(x, key));
  return out;
}

std::vector<std::size_t> get_counts(const json& j, const std::string& key) {
  if (j.is_number()) return {static_cast<std::size_t>(get_count(j, key))};
  if (!j.is_array()) bad(key, "expected an integer or an array of integers");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(static_cast<std::size_t>(get_count(x, key)));
  return out;
}

std::vector<std::string> get_strings(const json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "expected an array of vertex addresses");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) bad(key, "vertex addresses must be strings such as \"0.1\"");
    out.push_back(x.get<std::string>());
  }
  return out;
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) bad(key, "expected true or false");
  return j.get<bool>();
}

void parse_budget(const json& j, Budget& budget) {
  if (!j.is_object()) bad("budget", "expected an object with max_time, max_level, max_events");
  budget = Budget{};
  for (const auto& [k, v] : j.items()) {
    const std::string key = "budget." + k;
    if (k == "max_time") {
      budget.max_time = get_number(v, key);
    } else if (k == "max_level") {
      budget.max_level = static_cast<std::size_t>(get_count(v, key));
    } else if (k == "max_events") {
      budget.max_events = get_count(v, key);
    } else {
      bad(key, "unknown key");
    }
  }
}

}  // namespace

double ExperimentConfig::lambda() const {
  if (lambdas.size() != 1) bad("lambda", "expected a single value, got " + std::to_string(lambdas.size()));
  return lambdas.front();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "d",         "lambda",    "A0",     "B0",          "replicas", "budget", "checkpoints",
      "c_grid",    "n_list",    "t_list", "n",           "c",        "m",      "threshold",
      "m_list",    "bracket",   "tol",    "max_depth",   "seed",     "workers", "prune",
      "require_nontrivial",     "output"};
  return keys;
}

LoadedConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  LoadedConfig out;
  ExperimentConfig& cfg = out.config;
  const auto& known = config_keys();
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) bad(k, "unknown key");
    out.keys.insert(k);
  }

  // d first: vertex addresses are validated against it.
  if (j.contains("d")) {
    const auto d = get_count(j["d"], "d");
    if (d < 2) bad("d", "must be >= 2");
    cfg.d = static_cast<int>(d);
  }
  const TreeParams tree(cfg.d);

  for (const auto& [k, v] : j.items()) {
    if (k == "d") continue;
    if (k == "lambda") {
      cfg.lambdas = get_numbers(v, k);
    } else if (k == "A0") {
      cfg.initial.type1 = parse_vertex_list(get_strings(v, k), tree, k);
    } else if (k == "B0") {
      cfg.initial.type2 = parse_vertex_list(get_strings(v, k), tree, k);
    } else if (k == "replicas") {
      cfg.replicas = get_count(v, k);
    } else if (k == "budget") {
      parse_budget(v, cfg.budget);
    } else if (k == "checkpoints") {
      cfg.checkpoints = get_numbers(v, k);
    } else if (k == "c_grid") {
      cfg.c_grid = get_numbers(v, k);
    } else if (k == "n_list") {
      cfg.n_list = get_counts(v, k);
    } else if (k == "t_list") {
      cfg.t_list = get_numbers(v, k);
    } else if (k == "n") {
      cfg.n = static_cast<std::size_t>(get_count(v, k));
    } else if (k == "c") {
      cfg.c = get_number(v, k);
    } else if (k == "m") {
      cfg.m = static_cast<std::size_t>(get_count(v, k));
    } else if (k == "threshold") {
      cfg.threshold = get_number(v, k);
    } else if (k == "m_list") {
      cfg.m_list = get_counts(v, k);
    } else if (k == "bracket") {
      const auto b = get_numbers(v, k);
      if (b.size() != 2) bad(k, "expected [low, high]");
      cfg.bracket = {b[0], b[1]};
    } else if (k == "tol") {
      cfg.tol = get_number(v, k);
    } else if (k == "max_depth") {
      cfg.max_depth = static_cast<std::size_t>(get_count(v, k));
    } else if (k == "seed") {
      cfg.seed = get_count(v, k);
      cfg.seed_defaulted = false;
    } else if (k == "workers") {
      cfg.workers = static_cast<unsigned>(get_count(v, k));
    } else if (k == "prune") {
      cfg.prune = get_bool(v, k);
    } else if (k == "require_nontrivial") {
      cfg.require_nontrivial = get_bool(v, k);
    } else if (k == "output") {
      if (!v.is_string()) bad(k, "expected a path string");
      cfg.output = v.get<std::string>();
    }
  }
  try {
    validate_config(cfg.initial, tree);
  } catch (const ConfigError& e) {
    bad("A0", e.what());
  }
  return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.d < 2) bad("d", "must be >= 2");
  if (cfg.replicas < 1) bad("replicas", "must be >= 1");
  if (cfg.lambdas.empty()) bad("lambda", "grid is empty");
  for (double l : cfg.lambdas) {
    if (!(l > 1.0) || !std::isfinite(l)) bad("lambda", "values must be finite and > 1");
  }
  if (!cfg.budget.any()) bad("budget", "at least one of max_time, max_level, max_events must be set");
  if (cfg.budget.max_time && !(*cfg.budget.max_time >= 0.0)) bad("budget.max_time", "must be >= 0");
  for (double t : cfg.checkpoints) {
    if (!(t >= 0.0)) bad("checkpoints", "times must be >= 0");
  }
}

std::vector<VertexId> parse_vertex_list(const std::vector<std::string>& addresses, const TreeParams& p,
                                        const std::string& key) {
  std::vector<VertexId> out;
  for (const auto& a : addresses) {
    try {
      VertexId v = a == "root" ? VertexId{} : VertexId::parse(a);
      require_valid(v, p);
      out.push_back(std::move(v));
    } catch (const Error& e) {
      bad(key, e.what());
    }
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      bad(key, "'" + item + "' is not a number");
    }
    if (used != item.size() || !std::isfinite(x)) bad(key, "'" + item + "' is not a finite number");
    out.push_back(x);
  }
  if (out.empty()) bad(key, "expected at least one number");
  return out;
}

}  // namespace escape_lab
