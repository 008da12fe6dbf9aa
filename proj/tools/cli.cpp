#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "escape_lab/analytic.hpp"
#include "escape_lab/config.hpp"
#include "escape_lab/csv.hpp"
#include "escape_lab/errors.hpp"
#include "escape_lab/experiments.hpp"
#include "plot.hpp"

namespace escape_lab::cli {
namespace {

using nlohmann::json;

enum class Kind { Count, Number, NumberList, CountList, VertexList, Budget, String };

struct FlagSpec {
  std::string flag;  // without dashes
  std::string key;   // config key; "budget.<field>" for budget members
  Kind kind;
  std::string help;
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs{
      {"d", "d", Kind::Count, "tree degree: every vertex has d+1 neighbours (d >= 2)"},
      {"lambda", "lambda", Kind::NumberList, "type-2 rate; comma-separated grid for survival-scan"},
      {"A0", "A0", Kind::VertexList, "initial type-1 vertices, comma-separated (root, 0, 0.1, ...)"},
      {"B0", "B0", Kind::VertexList, "initial type-2 vertices, comma-separated"},
      {"replicas", "replicas", Kind::Count, "number of independent replicas"},
      {"max-time", "budget.max_time", Kind::Budget, "stop runs at this time"},
      {"max-level", "budget.max_level", Kind::Budget, "stop runs once type 1 reaches this level"},
      {"max-events", "budget.max_events", Kind::Budget, "stop runs after this many events"},
      {"checkpoints", "checkpoints", Kind::NumberList, "times at which level counts are recorded"},
      {"c-grid", "c_grid", Kind::NumberList, "speeds c; level n is read at time n/c"},
      {"n-list", "n_list", Kind::CountList, "levels n"},
      {"t-list", "t_list", Kind::NumberList, "times t"},
      {"n", "n", Kind::Count, "level n"},
      {"c", "c", Kind::Number, "speed c"},
      {"m", "m", Kind::Count, "stride m of the offspring count"},
      {"threshold", "threshold", Kind::Number, "per-step time threshold of the offspring count"},
      {"m-list", "m_list", Kind::CountList, "strides for the escape offspring trend"},
      {"bracket", "bracket", Kind::NumberList, "low,high lambda bracket"},
      {"tol", "tol", Kind::Number, "bisection stops below this width"},
      {"max-depth", "max_depth", Kind::Count, "deepest level a lazy Richardson walk may visit"},
      {"seed", "seed", Kind::Count, "master seed (default 0)"},
      {"workers", "workers", Kind::Count, "worker threads (default: all cores; ESCAPE_LAB_WORKERS overrides)"},
      {"output", "output", Kind::String, "CSV output path; a .meta.json sidecar is written next to it"},
  };
  return specs;
}

const FlagSpec& spec_for(const std::string& flag) {
  for (const auto& s : flag_specs()) {
    if (s.flag == flag) return s;
  }
  throw std::logic_error("unknown flag spec " + flag);
}

[[noreturn]] void bad_flag(const std::string& flag, const std::string& why) {
  throw ConfigError("--" + flag + ": " + why);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!text.empty() && text.back() == ',') out.emplace_back();
  if (text.empty()) out.emplace_back();
  return out;
}

std::uint64_t to_count(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    x = std::stoull(text, &used);
  } catch (const std::exception&) {
    bad_flag(flag, "'" + text + "' is not a non-negative integer");
  }
  if (used != text.size()) bad_flag(flag, "'" + text + "' is not a non-negative integer");
  return x;
}

json flag_value(const FlagSpec& spec, const std::string& text) {
  switch (spec.kind) {
    case Kind::Count:
      return to_count(text, spec.flag);
    case Kind::Number:
      return parse_number_list(text, spec.flag).at(0);
    case Kind::NumberList:
      return parse_number_list(text, spec.flag);
    case Kind::CountList: {
      json arr = json::array();
      for (const auto& item : split(text)) arr.push_back(to_count(item, spec.flag));
      return arr;
    }
    case Kind::VertexList: {
      json arr = json::array();
      if (text.empty()) return arr;
      for (const auto& item : split(text)) arr.push_back(item);
      return arr;
    }
    case Kind::Budget:
      if (spec.key == "budget.max_time") return parse_number_list(text, spec.flag).at(0);
      return to_count(text, spec.flag);
    case Kind::String:
      return text;
  }
  return nullptr;
}

/// Flag values registered on a subcommand, merged with an optional config file.
class Options {
 public:
  Options(CLI::App* app, const std::vector<std::string>& flags, bool has_prune_flags) : app_(app) {
    app->add_option("--config", config_path_, "JSON config file; its keys win over flags");
    for (const auto& f : flags) {
      const auto& spec = spec_for(f);
      options_[f] = app->add_option("--" + f, raw_[f], spec.help);
    }
    if (has_prune_flags) {
      no_prune_ = app->add_flag("--no-prune", "simulate type 2 everywhere instead of only where it can meet type 1");
      require_nontrivial_ = app->add_flag("--require-nontrivial", "reject configurations with type 1 enclosed");
    }
  }

  bool selected() const { return app_->parsed(); }

  ExperimentConfig resolve(std::ostream& err) const {
    json merged = json::object();
    json file = json::object();
    if (!config_path_.empty()) {
      std::ifstream is(config_path_);
      if (!is) throw ConfigError("--config: cannot read config file '" + config_path_ + "'");
      try {
        file = json::parse(is);
      } catch (const json::parse_error& e) {
        throw ConfigError("--config: '" + config_path_ + "' is not valid JSON: " + e.what());
      }
      if (!file.is_object()) throw ConfigError("--config: '" + config_path_ + "' must hold a JSON object");
    }

    auto conflict = [&](const std::string& flag, const std::string& key) {
      err << "warning: --" << flag << " ignored; config key '" << key << "' takes precedence\n";
    };
    for (const auto& [flag, opt] : options_) {
      if (opt->count() == 0) continue;
      const auto& spec = spec_for(flag);
      const json value = flag_value(spec, raw_.at(flag));
      if (spec.kind == Kind::Budget) {
        if (file.contains("budget")) {
          conflict(flag, "budget");
          continue;
        }
        merged["budget"][spec.key.substr(7)] = value;
        continue;
      }
      if (file.contains(spec.key)) {
        conflict(flag, spec.key);
        continue;
      }
      merged[spec.key] = value;
    }
    if (no_prune_ && no_prune_->count()) {
      if (file.contains("prune")) {
        conflict("no-prune", "prune");
      } else {
        merged["prune"] = false;
      }
    }
    if (require_nontrivial_ && require_nontrivial_->count()) {
      if (file.contains("require_nontrivial")) {
        conflict("require-nontrivial", "require_nontrivial");
      } else {
        merged["require_nontrivial"] = true;
      }
    }
    for (const auto& [k, v] : file.items()) merged[k] = v;

    ExperimentConfig cfg = parse_config(merged.dump()).config;
    if (const char* env = std::getenv("ESCAPE_LAB_WORKERS"); env && *env) {
      cfg.workers = static_cast<unsigned>(to_count(env, "workers (from ESCAPE_LAB_WORKERS)"));
    }
    return cfg;
  }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, CLI::Option*> options_;
  CLI::Option* no_prune_ = nullptr;
  CLI::Option* require_nontrivial_ = nullptr;
};

struct Command {
  CLI::App* app;
  std::unique_ptr<Options> options;
  std::function<void(const ExperimentConfig&, std::ostream&, std::ostream&)> run;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void emit(const CsvTable& table, const ExperimentConfig& cfg, const std::string& command, double seconds,
          std::vector<std::string> notes, std::ostream& out) {
  out << to_csv_text(table);
  if (cfg.output.empty()) return;
  RunMetadata meta;
  meta.command = command;
  describe(cfg, meta);
  meta.workers = resolve_workers(cfg.workers, cfg.replicas);
  meta.wall_clock_seconds = seconds;
  if (cfg.seed_defaulted) notes.push_back("no seed given; the default seed 0 was used");
  meta.notes = std::move(notes);
  write_csv(cfg.output, table);
  write_metadata(cfg.output, meta);
}

const char* kBudgetNote =
    "survival is AliveAtBudget at a finite budget; finite budgets overestimate true survival";

void run_analytic(const ExperimentConfig& cfg, std::ostream& out) {
  const ModelParams p(cfg.d, cfg.lambda());
  const auto speeds = richardson_speeds(cfg.d);
  const auto minimum = profile_minimizer(p);
  std::string r1, r2;
  try {
    if (const auto band = escape_band(p)) {
      r1 = format_number(band->r1);
      r2 = format_number(band->r2);
    }
  } catch (const DomainError&) {
    // Critical case: the band is undecided and left empty.
  }
  CsvTable t;
  t.header = {"d", "lambda", "lambda_c", "a", "b", "c0", "g_c0", "r1", "r2"};
  t.rows.push_back({std::to_string(cfg.d), format_number(p.lambda()), format_number(lambda_critical(cfg.d)),
                    format_number(speeds.a), format_number(speeds.b), format_number(minimum.c0),
                    format_number(minimum.g_min), r1, r2});
  out << to_csv_text(t);
  if (!cfg.output.empty()) {
    RunMetadata meta;
    meta.command = "analytic";
    meta.params = {{"d", std::to_string(cfg.d)}, {"lambda", format_number(p.lambda())}};
    write_csv(cfg.output, t);
    write_metadata(cfg.output, meta);
  }
}

void run_escape_once(const ExperimentConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  const ModelParams p(cfg.d, cfg.lambda());
  RunOptions opts;
  opts.budget = cfg.budget;
  opts.checkpoints = cfg.checkpoints;
  opts.escape.prune_irrelevant_type2 = cfg.prune;
  opts.require_nontrivial = cfg.require_nontrivial;
  const RunOutcome r = run(cfg.initial, p, replica_seed(cfg.seed, 0), opts);

  CsvTable summary;
  summary.header = {"outcome", "budget_hit", "time", "events", "nontrivial", "size_A", "size_B", "max_level_A"};
  summary.rows.push_back({to_string(r.outcome), to_string(r.budget_hit), format_number(r.time),
                          format_number(r.events), r.nontrivial ? "1" : "0", format_number(r.final_type1),
                          format_number(r.final_type2),
                          r.final_max_level_type1 ? std::to_string(*r.final_max_level_type1) : ""});
  out << to_csv_text(summary);
  if (!cfg.output.empty()) {
    RunMetadata meta;
    meta.command = "run-escape";
    describe(cfg, meta);
    meta.params.emplace_back("outcome", to_string(r.outcome));
    meta.wall_clock_seconds = seconds_since(start);
    if (cfg.seed_defaulted) meta.notes.push_back("no seed given; the default seed 0 was used");
    if (!r.nontrivial) meta.notes.push_back("type 1 starts enclosed by type 2 and cannot survive");
    write_csv(cfg.output, checkpoint_table(0, r));
    write_metadata(cfg.output, meta);
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and analysis of two-type escape dynamics on homogeneous trees", "escape_lab"};
  app.require_subcommand(1);
  std::vector<Command> commands;

  auto add = [&](const std::string& name, const std::string& description, std::vector<std::string> flags,
                 bool prune_flags, auto body) {
    CLI::App* sub = app.add_subcommand(name, description);
    flags.push_back("seed");
    flags.push_back("output");
    auto opts = std::make_unique<Options>(sub, flags, prune_flags);
    commands.push_back({sub, std::move(opts), body});
  };

  const std::vector<std::string> escape_flags{"d", "lambda", "A0", "B0", "replicas", "max-time", "max-level",
                                              "max-events", "workers"};

  add("analytic", "closed-form speeds, critical value and growth-profile roots", {"d", "lambda"}, false,
      [](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) { run_analytic(cfg, out); });

  add("run-richardson", "Richardson level counts N_n(n/c), F_n(n/c) against exact expectations",
      {"d", "n-list", "c-grid", "replicas", "workers"}, false,
      [](const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
        const auto start = Clock::now();
        const auto result = richardson_counts(cfg);
        const double secs = seconds_since(start);
        emit(summary_table(result), ExperimentConfig{}, "run-richardson", secs, {}, out);
        if (!cfg.output.empty()) {
          std::ostringstream sink;
          emit(to_table(result), cfg, "run-richardson", secs, {"elapsed time is recorded once, as wall_clock_seconds, so the data file is reproducible"},
               sink);
          err << "wrote " << cfg.output << '\n';
        }
      });

  {
    auto flags = escape_flags;
    flags.push_back("checkpoints");
    add("run-escape", "a single escape run; checkpoint level counts go to --output", flags, true,
        [](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) { run_escape_once(cfg, out); });
  }

  add("survival-scan", "survival frequency at budget over a lambda grid", escape_flags, true,
      [](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
        const auto start = Clock::now();
        const auto curve = survival_scan(cfg);
        emit(to_table(curve), cfg, "survival-scan", seconds_since(start), {kBudgetNote}, out);
      });

  {
    auto flags = escape_flags;
    flags.push_back("bracket");
    flags.push_back("tol");
    add("critical-estimate", "bisection for the survival threshold in lambda", flags, true,
        [](const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
          const auto start = Clock::now();
          const auto est = critical_estimate(cfg);
          if (est.non_monotone) err << "warning: survival frequencies were not monotone in lambda; interval widened\n";
          emit(to_table(est), cfg, "critical-estimate", seconds_since(start),
               {kBudgetNote, "Monte Carlo localisation, not a hypothesis test"}, out);
        });
  }

  add("profile-estimate", "empirical growth-profile exponents against the analytic profile",
      {"d", "lambda", "A0", "B0", "replicas", "max-events", "c-grid", "n-list", "workers"}, true,
      [](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
        const auto start = Clock::now();
        const auto rows = profile_estimate(cfg);
        emit(to_table(rows), cfg, "profile-estimate", seconds_since(start),
             {"conditional means use runs with type 1 alive at time max(n/c)"}, out);
      });

  add("containment", "frequency of R_1(t) not contained in R_lambda(t) for independent fields",
      {"d", "lambda", "t-list", "replicas", "max-depth", "workers"}, false,
      [](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
        const auto start = Clock::now();
        const auto rows = containment_experiment(cfg);
        emit(to_table(rows), cfg, "containment", seconds_since(start), {}, out);
      });

  add("exclusive-count", "V_n(n/c) Monte Carlo mean against the exact Erlang product",
      {"d", "lambda", "n", "c", "replicas", "workers"}, false,
      [](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
        const auto start = Clock::now();
        const auto r = exclusive_count_experiment(cfg);
        emit(to_table(r), cfg, "exclusive-count", seconds_since(start), {}, out);
      });

  std::string variant = "both";
  {
    add("gw-offspring", "offspring means of the embedded branching process",
        {"d", "lambda", "m", "threshold", "m-list", "c", "replicas", "max-events", "workers"}, true,
        [&variant](const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
          const auto start = Clock::now();
          std::vector<OffspringRow> rows;
          if (variant == "richardson" || variant == "both") rows.push_back(gw_offspring_richardson(cfg));
          if (variant == "escape" || variant == "both") {
            for (auto& r : gw_offspring_escape(cfg)) rows.push_back(std::move(r));
          }
          emit(to_table(rows), cfg, "gw-offspring", seconds_since(start),
               {"escape rows have no exact oracle; compare log_rate with target_rate as m grows"}, out);
        });
    commands.back().app->add_option("--variant", variant, "richardson, escape or both")
        ->check(CLI::IsMember({"richardson", "escape", "both"}));
  }

  CLI::App* plot = app.add_subcommand("plot", "SVG chart from a survival-scan or profile-estimate CSV");
  std::string plot_input, plot_kind = "survival", plot_output;
  std::string plot_d = "2";
  plot->add_option("--input", plot_input, "CSV produced by survival-scan or profile-estimate")->required();
  plot->add_option("--kind", plot_kind, "survival or profile");
  plot->add_option("--d", plot_d, "tree degree for the critical-value marker");
  plot->add_option("--output", plot_output, "SVG output path")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (plot->parsed()) {
      const int d = static_cast<int>(to_count(plot_d, "d"));
      TreeParams check(d);
      emit_plot(plot_input, parse_plot_kind(plot_kind), d, plot_output);
      return kOk;
    }
    for (auto& cmd : commands) {
      if (!cmd.options->selected()) continue;
      const ExperimentConfig cfg = cmd.options->resolve(err);
      cmd.run(cfg, out, err);
      return kOk;
    }
    err << "error: no subcommand given\n";
    return kValidationError;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kResourceError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace escape_lab::cli
