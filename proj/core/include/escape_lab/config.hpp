#pragma once

// Experiment configuration shared by the library harness and the command
// line. Files are JSON objects whose keys match the long CLI flags with
// dashes replaced by underscores; --max-time, --max-level and --max-events
// live inside a "budget" object. For example
//
//   {"d": 2, "lambda": 2.0, "A0": [""], "B0": ["0"],
//    "budget": {"max_level": 30}, "replicas": 200, "seed": 7}
//
// Vertex addresses are dot-separated branch indices; "" or "root" is the root.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "escape_lab/escape.hpp"

namespace escape_lab {

struct ExperimentConfig {
  int d = 2;
  std::vector<double> lambdas{2.0};  ///< single value for most experiments, a grid for survival scans
  InitialConfig initial{{VertexId{}}, {VertexId::parse("0")}};
  std::uint64_t replicas = 200;
  Budget budget{std::nullopt, std::size_t{30}, std::nullopt};
  std::vector<double> checkpoints;
  std::vector<double> c_grid{1.5};
  std::vector<std::size_t> n_list{8, 12, 16};
  std::vector<double> t_list{4.0, 8.0, 12.0};
  std::size_t n = 10;
  double c = 1.2;
  std::size_t m = 6;
  double threshold = 0.9;
  std::vector<std::size_t> m_list{4, 6, 8};
  std::optional<std::pair<double, double>> bracket;
  double tol = 0.25;
  std::size_t max_depth = 256;  ///< deepest level a lazy Richardson walk may reach
  std::uint64_t seed = 0;
  bool seed_defaulted = true;
  unsigned workers = 0;  ///< 0 = hardware concurrency
  bool prune = true;
  bool require_nontrivial = false;
  std::string output;

  double lambda() const;  ///< the single lambda; ConfigError when a grid was given
};

struct LoadedConfig {
  ExperimentConfig config;
  std::set<std::string> keys;  ///< top-level keys present in the file
};

/// Keys accepted at the top level of a configuration file.
const std::vector<std::string>& config_keys();

/// Throws ConfigError naming the offending key for unknown keys, wrong types,
/// or values outside their domain.
LoadedConfig parse_config(const std::string& json_text);
LoadedConfig load_config(const std::filesystem::path& path);

/// Basic domain checks shared by all experiments: replicas >= 1, d >= 2,
/// lambdas > 1, nonempty grids, finite budgets.
void validate_common(const ExperimentConfig& cfg);

std::vector<VertexId> parse_vertex_list(const std::vector<std::string>& addresses, const TreeParams& p,
                                        const std::string& key);

/// Comma-separated numbers, e.g. "2,4,5.8". Throws ConfigError naming `key`.
std::vector<double> parse_number_list(const std::string& text, const std::string& key);

}  // namespace escape_lab
