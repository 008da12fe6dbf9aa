#include "escape_lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "escape_lab/analytic.hpp"
#include "escape_lab/erlang.hpp"
#include "escape_lab/errors.hpp"
#include "escape_lab/richardson.hpp"
#include "escape_lab/rng.hpp"

namespace escape_lab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += format_number(xs[i]);
  }
  return out;
}

std::string join_counts(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string join_vertices(const std::vector<VertexId>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ';';
    out += vs[i].is_root() ? std::string("root") : vs[i].to_string();
  }
  return out;
}

std::string optional_number(const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : std::string(); }

RunOptions run_options(const ExperimentConfig& cfg) {
  RunOptions o;
  o.budget = cfg.budget;
  o.escape.prune_irrelevant_type2 = cfg.prune;
  o.require_nontrivial = cfg.require_nontrivial;
  o.record_checkpoint_distance = false;
  return o;
}

double binomial_se(double p, std::uint64_t n) {
  return n ? std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n)) : 0.0;
}

void require_positive(double x, const std::string& key) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("config key '" + key + "': must be finite and > 0");
}

}  // namespace

unsigned resolve_workers(unsigned requested, std::uint64_t jobs) noexcept {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (jobs < n) n = static_cast<unsigned>(std::max<std::uint64_t>(jobs, 1));
  return n;
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) noexcept {
  return derive_seed(master, {replica});
}

// Survival -------------------------------------------------------------------

SurvivalRow survival_at(const ExperimentConfig& cfg, double lambda) {
  validate_common(cfg);
  const ModelParams params(cfg.d, lambda);
  const RunOptions opts = run_options(cfg);
  struct Result {
    Outcome outcome;
    double time;
    bool nontrivial;
  };
  const auto results = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
    const RunOutcome out = run(cfg.initial, params, replica_seed(cfg.seed, r), opts);
    return Result{out.outcome, out.time, out.nontrivial};
  });

  SurvivalRow row;
  row.lambda = lambda;
  row.replicas = cfg.replicas;
  RunningStats extinction;
  for (const auto& res : results) {
    row.nontrivial = res.nontrivial;
    switch (res.outcome) {
      case Outcome::Extinct:
        ++row.extinct;
        extinction.add(res.time);
        break;
      case Outcome::AliveAtBudget:
        ++row.alive_at_budget;
        break;
      case Outcome::EscapeDeclared:
        ++row.escape_declared;
        break;
    }
  }
  const std::uint64_t survived = row.alive_at_budget + row.escape_declared;
  row.survival_frequency = static_cast<double>(survived) / static_cast<double>(row.replicas);
  row.survival_ci = wilson_interval(survived, row.replicas);
  row.mean_extinction_time = extinction.count() ? extinction.summary().mean : kNaN;
  return row;
}

SurvivalCurve survival_scan(const ExperimentConfig& cfg) {
  validate_common(cfg);
  SurvivalCurve curve;
  curve.budget = cfg.budget;
  for (double lambda : cfg.lambdas) curve.rows.push_back(survival_at(cfg, lambda));
  return curve;
}

CsvTable to_table(const SurvivalCurve& curve) {
  CsvTable t;
  t.header = {"lambda",        "replicas",      "extinct",     "alive_at_budget", "escape_declared",
              "survival_freq", "ci_low",        "ci_high",     "mean_extinction_time", "nontrivial"};
  for (const auto& r : curve.rows) {
    t.rows.push_back({format_number(r.lambda), format_number(r.replicas), format_number(r.extinct),
                      format_number(r.alive_at_budget), format_number(r.escape_declared),
                      format_number(r.survival_frequency), format_number(r.survival_ci.low),
                      format_number(r.survival_ci.high), format_number(r.mean_extinction_time),
                      r.nontrivial ? "1" : "0"});
  }
  return t;
}

// Critical value ------------------------------------------------------------

CriticalEstimate critical_estimate(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (!cfg.bracket) throw ConfigError("config key 'bracket': required for the critical-value estimate");
  require_positive(cfg.tol, "tol");
  double lo = cfg.bracket->first;
  double hi = cfg.bracket->second;
  const double target = lambda_critical(cfg.d);
  if (!(lo > 1.0) || !(lo < target) || !(target < hi) || !std::isfinite(hi)) {
    throw DomainError("bracket [" + format_number(lo) + ", " + format_number(hi) +
                      "] must straddle the critical value " + format_number(target) + " for d=" +
                      std::to_string(cfg.d));
  }

  CriticalEstimate est;
  SurvivalRow low_row = survival_at(cfg, lo);
  SurvivalRow high_row = survival_at(cfg, hi);
  est.evaluations = {low_row, high_row};
  est.frequency_low = low_row.survival_frequency;
  est.frequency_high = high_row.survival_frequency;
  est.threshold = 0.5 * (est.frequency_low + est.frequency_high);
  if (est.frequency_low < est.frequency_high) est.non_monotone = true;

  double last_width = hi - lo;
  while (hi - lo > cfg.tol) {
    const double mid = 0.5 * (lo + hi);
    const SurvivalRow row = survival_at(cfg, mid);
    est.evaluations.push_back(row);
    const double f = row.survival_frequency;
    const double se = binomial_se(f, row.replicas);
    auto beyond = [&](const SurvivalRow& ref, double sign) {
      const double noise = 2.0 * std::hypot(se, binomial_se(ref.survival_frequency, ref.replicas));
      return sign * (f - ref.survival_frequency) > noise;
    };
    if (beyond(low_row, 1.0) || beyond(high_row, -1.0)) est.non_monotone = true;
    last_width = hi - lo;
    if (f >= est.threshold) {
      lo = mid;
      low_row = row;
    } else {
      hi = mid;
      high_row = row;
    }
  }
  if (est.non_monotone) {
    // Frequencies contradicted the ordering: widen by the last step on both sides.
    lo = std::max(cfg.bracket->first, lo - last_width);
    hi = std::min(cfg.bracket->second, hi + last_width);
  }
  est.low = lo;
  est.high = hi;
  return est;
}

CsvTable to_table(const CriticalEstimate& est) {
  CsvTable t;
  t.header = {"kind", "lambda", "replicas", "survival_freq", "ci_low", "ci_high", "interval_low", "interval_high",
              "threshold", "non_monotone"};
  const std::string flag = est.non_monotone ? "1" : "0";
  for (const auto& r : est.evaluations) {
    t.rows.push_back({"evaluation", format_number(r.lambda), format_number(r.replicas),
                      format_number(r.survival_frequency), format_number(r.survival_ci.low),
                      format_number(r.survival_ci.high), format_number(est.low), format_number(est.high),
                      format_number(est.threshold), flag});
  }
  t.rows.push_back({"interval", "", "", "", "", "", format_number(est.low), format_number(est.high),
                    format_number(est.threshold), flag});
  return t;
}

// Growth profile ------------------------------------------------------------

std::vector<ProfileRow> profile_estimate(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.c_grid.empty()) throw ConfigError("config key 'c_grid': grid is empty");
  if (cfg.n_list.empty()) throw ConfigError("config key 'n_list': list is empty");
  for (double c : cfg.c_grid) require_positive(c, "c_grid");
  const ModelParams params(cfg.d, cfg.lambda());

  std::vector<double> times;
  for (double c : cfg.c_grid) {
    for (std::size_t n : cfg.n_list) times.push_back(static_cast<double>(n) / c);
  }
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  RunOptions opts = run_options(cfg);
  opts.budget = Budget{sorted.back(), std::nullopt, cfg.budget.max_events};
  opts.checkpoints = sorted;

  struct Result {
    bool alive;
    std::vector<std::uint64_t> counts;  // per entry of `times`
  };
  const auto results = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
    const RunOutcome out = run(cfg.initial, params, replica_seed(cfg.seed, r), opts);
    if (out.budget_hit == BudgetHit::Events) {
      throw ResourceError("profile run " + std::to_string(r) + " hit the event budget before time " +
                          format_number(sorted.back()));
    }
    Result res{out.outcome != Outcome::Extinct, {}};
    for (std::size_t k = 0; k < times.size(); ++k) {
      const std::size_t n = cfg.n_list[k % cfg.n_list.size()];
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), times[k]);
      const auto& cp = out.checkpoints.at(static_cast<std::size_t>(it - sorted.begin()));
      res.counts.push_back(n < cp.level_counts.size() ? cp.level_counts[n] : 0);
    }
    return res;
  });

  std::vector<ProfileRow> rows;
  std::size_t k = 0;
  for (double c : cfg.c_grid) {
    for (std::size_t n : cfg.n_list) {
      ProfileRow row;
      row.c = c;
      row.n = n;
      row.time = times[k];
      row.replicas = cfg.replicas;
      RunningStats cond;
      RunningStats uncond;
      for (const auto& res : results) {
        const auto x = static_cast<double>(res.counts[k]);
        uncond.add(x);
        if (res.alive) cond.add(x);
      }
      row.surviving = cond.count();
      row.conditional = cond.summary();
      row.unconditional = uncond.summary();
      const double g = growth_profile_g(c, params);
      row.analytic_exponent = -g;
      row.upper_bound = std::exp(static_cast<double>(n) * (0.1 - g));
      if (row.surviving == 0) {
        row.status = "insufficient-data";
        row.empirical_exponent = kNaN;
      } else if (row.conditional.mean == 0.0) {
        row.status = "zero-mean";
        row.empirical_exponent = -std::numeric_limits<double>::infinity();
      } else {
        row.status = "ok";
        row.empirical_exponent = std::log(row.conditional.mean) / static_cast<double>(n);
      }
      rows.push_back(row);
      ++k;
    }
  }
  return rows;
}

CsvTable to_table(const std::vector<ProfileRow>& rows) {
  CsvTable t;
  t.header = {"c",           "n",          "t",       "replicas",           "surviving",         "mean_M_surviving",
              "se_surviving", "mean_M_all", "se_all",  "empirical_exponent", "analytic_exponent", "abs_error",
              "upper_bound", "status"};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.c), format_number(std::uint64_t{r.n}), format_number(r.time),
                      format_number(r.replicas), format_number(r.surviving), format_number(r.conditional.mean),
                      format_number(r.conditional.stderr_mean()), format_number(r.unconditional.mean),
                      format_number(r.unconditional.stderr_mean()), format_number(r.empirical_exponent),
                      format_number(r.analytic_exponent),
                      format_number(std::abs(r.empirical_exponent - r.analytic_exponent)),
                      format_number(r.upper_bound), r.status});
  }
  return t;
}

// Richardson level counts ---------------------------------------------------

LevelCountResult richardson_counts(const ExperimentConfig& cfg) {
  if (cfg.replicas < 1) throw ConfigError("config key 'replicas': must be >= 1");
  if (cfg.n_list.empty()) throw ConfigError("config key 'n_list': list is empty");
  if (cfg.c_grid.empty()) throw ConfigError("config key 'c_grid': grid is empty");
  for (double c : cfg.c_grid) require_positive(c, "c_grid");
  for (std::size_t n : cfg.n_list) {
    if (n < 1) throw ConfigError("config key 'n_list': levels must be >= 1");
  }
  const TreeParams tree(cfg.d);
  const std::size_t n_max = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());

  const auto per_replica = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
    const auto field = PassageTimeField::sample(tree, 1.0, n_max, replica_seed(cfg.seed, r));
    std::vector<LevelCountRow> rows;
    for (std::size_t n : cfg.n_list) {
      for (double c : cfg.c_grid) {
        const LevelCount lc = field.count_occupied(n, static_cast<double>(n) / c);
        rows.push_back({r, n, c, lc.occupied, lc.vacant});
      }
    }
    return rows;
  });

  LevelCountResult result;
  for (const auto& rows : per_replica) result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  const std::size_t per = cfg.n_list.size() * cfg.c_grid.size();
  for (std::size_t k = 0; k < per; ++k) {
    LevelCountSummary s;
    s.n = result.rows[k].n;
    s.c = result.rows[k].c;
    RunningStats occ;
    RunningStats vac;
    for (std::uint64_t r = 0; r < cfg.replicas; ++r) {
      const auto& row = result.rows[r * per + k];
      occ.add(static_cast<double>(row.occupied));
      vac.add(static_cast<double>(row.vacant));
    }
    s.occupied = occ.summary();
    s.vacant = vac.summary();
    s.expected_occupied = expected_occupied(s.n, s.c, tree);
    s.expected_vacant = expected_vacant(s.n, s.c, tree);
    s.z_occupied = z_score(s.occupied.mean, s.expected_occupied, s.occupied.stderr_mean());
    s.z_vacant = z_score(s.vacant.mean, s.expected_vacant, s.vacant.stderr_mean());
    result.summary.push_back(s);
  }
  return result;
}

CsvTable to_table(const LevelCountResult& result) {
  CsvTable t;
  t.header = {"replica", "n", "c", "N_n", "F_n"};
  for (const auto& r : result.rows) {
    t.rows.push_back({format_number(r.replica), format_number(std::uint64_t{r.n}), format_number(r.c),
                      format_number(r.occupied), format_number(r.vacant)});
  }
  return t;
}

CsvTable summary_table(const LevelCountResult& result) {
  CsvTable t;
  t.header = {"n",      "c",          "replicas",   "mean_N",     "se_N",       "exact_N",
              "z_N",    "mean_F",     "se_F",       "exact_F",    "z_F"};
  for (const auto& s : result.summary) {
    t.rows.push_back({format_number(std::uint64_t{s.n}), format_number(s.c), format_number(s.occupied.count),
                      format_number(s.occupied.mean), format_number(s.occupied.stderr_mean()),
                      format_number(s.expected_occupied), format_number(s.z_occupied), format_number(s.vacant.mean),
                      format_number(s.vacant.stderr_mean()), format_number(s.expected_vacant),
                      format_number(s.z_vacant)});
  }
  return t;
}

// Containment ---------------------------------------------------------------

std::vector<ContainmentRow> containment_experiment(const ExperimentConfig& cfg) {
  if (cfg.replicas < 1) throw ConfigError("config key 'replicas': must be >= 1");
  if (cfg.t_list.empty()) throw ConfigError("config key 't_list': list is empty");
  const ModelParams params(cfg.d, cfg.lambda());
  const double speed = richardson_speeds(cfg.d).b;
  for (double t : cfg.t_list) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("config key 't_list': times must be finite and >= 0");
    if (t * speed > static_cast<double>(cfg.max_depth)) {
      throw ResourceError("containment at t=" + format_number(t) + " needs levels up to t*b = " +
                          format_number(t * speed) + " but max_depth is " + std::to_string(cfg.max_depth));
    }
  }
  TraversalLimits limits;
  limits.max_level = cfg.max_depth;

  const auto per_replica = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
    const std::uint64_t s = replica_seed(cfg.seed, r);
    const LazyField slow(params.tree(), 1.0, derive_seed(s, {1}));
    const LazyField fast(params.tree(), params.lambda(), derive_seed(s, {2}));
    std::vector<char> violated;
    for (double t : cfg.t_list) violated.push_back(reached_set_contained(slow, fast, t, limits) ? 0 : 1);
    return violated;
  });

  std::vector<ContainmentRow> rows;
  for (std::size_t k = 0; k < cfg.t_list.size(); ++k) {
    ContainmentRow row;
    row.t = cfg.t_list[k];
    row.replicas = cfg.replicas;
    for (const auto& v : per_replica) row.violations += static_cast<std::uint64_t>(v[k]);
    row.frequency = static_cast<double>(row.violations) / static_cast<double>(row.replicas);
    row.ci = wilson_interval(row.violations, row.replicas);
    rows.push_back(row);
  }
  return rows;
}

CsvTable to_table(const std::vector<ContainmentRow>& rows) {
  CsvTable t;
  t.header = {"t", "replicas", "violations", "violation_freq", "ci_low", "ci_high"};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.t), format_number(r.replicas), format_number(r.violations),
                      format_number(r.frequency), format_number(r.ci.low), format_number(r.ci.high)});
  }
  return t;
}

// Exclusive count -----------------------------------------------------------

ExclusiveCountResult exclusive_count_experiment(const ExperimentConfig& cfg) {
  if (cfg.replicas < 1) throw ConfigError("config key 'replicas': must be >= 1");
  if (cfg.n < 1) throw ConfigError("config key 'n': must be >= 1");
  require_positive(cfg.c, "c");
  const ModelParams params(cfg.d, cfg.lambda());
  const double t = static_cast<double>(cfg.n) / cfg.c;

  const auto counts = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
    const std::uint64_t s = replica_seed(cfg.seed, r);
    const auto slow = PassageTimeField::sample(params.tree(), 1.0, cfg.n, derive_seed(s, {1}));
    const auto fast = PassageTimeField::sample(params.tree(), params.lambda(), cfg.n, derive_seed(s, {2}));
    const auto a = slow.level_times(cfg.n);
    const auto b = fast.level_times(cfg.n);
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] <= t && b[i] > t) v += 1.0;
    }
    return v;
  });

  ExclusiveCountResult out;
  out.n = cfg.n;
  out.c = cfg.c;
  out.lambda = params.lambda();
  out.sample = summarize(counts);
  out.exact = expected_exclusive(cfg.n, cfg.c, params);
  out.z = z_score(out.sample.mean, out.exact, out.sample.stderr_mean());
  return out;
}

CsvTable to_table(const ExclusiveCountResult& r) {
  CsvTable t;
  t.header = {"n", "c", "lambda", "replicas", "mean_V", "se_V", "ci_low", "ci_high", "exact_V", "z"};
  const Interval ci = r.sample.ci95();
  t.rows.push_back({format_number(std::uint64_t{r.n}), format_number(r.c), format_number(r.lambda),
                    format_number(r.sample.count), format_number(r.sample.mean),
                    format_number(r.sample.stderr_mean()), format_number(ci.low), format_number(ci.high),
                    format_number(r.exact), format_number(r.z)});
  return t;
}

// Offspring means -----------------------------------------------------------

OffspringRow gw_offspring_richardson(const ExperimentConfig& cfg) {
  if (cfg.replicas < 1) throw ConfigError("config key 'replicas': must be >= 1");
  if (cfg.m < 1) throw ConfigError("config key 'm': must be >= 1");
  if (!(cfg.threshold >= 0.0)) throw ConfigError("config key 'threshold': must be >= 0");
  const TreeParams tree(cfg.d);
  const VertexId x = VertexId::parse("0");

  const auto counts = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
    const auto field = PassageTimeField::sample(tree, 1.0, 1 + cfg.m, replica_seed(cfg.seed, r));
    return static_cast<double>(field.gw_offspring(x, cfg.m, cfg.threshold));
  });

  OffspringRow row;
  row.variant = "richardson";
  row.m = cfg.m;
  row.threshold = cfg.threshold;
  row.replicas = cfg.replicas;
  row.sample = summarize(counts);
  const double m = static_cast<double>(cfg.m);
  row.oracle = std::pow(static_cast<double>(cfg.d), m) * erlang_cdf(cfg.m, 1.0, cfg.threshold * m);
  row.z = z_score(row.sample.mean, row.oracle, row.sample.stderr_mean());
  row.log_rate = std::log(row.sample.mean) / m;
  row.target_rate = std::log(row.oracle) / m;
  return row;
}

std::vector<OffspringRow> gw_offspring_escape(const ExperimentConfig& cfg) {
  if (cfg.replicas < 1) throw ConfigError("config key 'replicas': must be >= 1");
  if (cfg.m_list.empty()) throw ConfigError("config key 'm_list': list is empty");
  require_positive(cfg.c, "c");
  const ModelParams params(cfg.d, cfg.lambda());
  const InitialConfig start{{VertexId::parse("0")}, {VertexId{}}};

  std::vector<OffspringRow> rows;
  for (std::size_t m : cfg.m_list) {
    if (m < 1) throw ConfigError("config key 'm_list': strides must be >= 1");
    const double t = static_cast<double>(m) / cfg.c;
    RunOptions opts = run_options(cfg);
    opts.budget = Budget{t, std::nullopt, cfg.budget.max_events};
    opts.checkpoints = {t};
    const auto counts = parallel_map(cfg.replicas, cfg.workers, [&](std::uint64_t r) {
      const RunOutcome out = run(start, params, replica_seed(cfg.seed, r), opts);
      const auto& levels = out.checkpoints.at(0).level_counts;
      return static_cast<double>(1 + m < levels.size() ? levels[1 + m] : 0);
    });
    OffspringRow row;
    row.variant = "escape";
    row.m = m;
    row.threshold = 1.0 / cfg.c;
    row.replicas = cfg.replicas;
    row.sample = summarize(counts);
    row.oracle = kNaN;
    row.z = kNaN;
    row.log_rate = std::log(row.sample.mean) / static_cast<double>(m);
    row.target_rate = -growth_profile_g(cfg.c, params);
    rows.push_back(row);
  }
  return rows;
}

CsvTable to_table(const std::vector<OffspringRow>& rows) {
  CsvTable t;
  t.header = {"variant", "m", "threshold", "replicas", "mean_Z1", "se_Z1", "ci_low", "ci_high",
              "oracle_mean", "z", "log_rate", "target_rate"};
  for (const auto& r : rows) {
    const Interval ci = r.sample.ci95();
    t.rows.push_back({r.variant, format_number(std::uint64_t{r.m}), format_number(r.threshold),
                      format_number(r.replicas), format_number(r.sample.mean), format_number(r.sample.stderr_mean()),
                      format_number(ci.low), format_number(ci.high), format_number(r.oracle), format_number(r.z),
                      format_number(r.log_rate), format_number(r.target_rate)});
  }
  return t;
}

// Single escape runs ----------------------------------------------------------

CsvTable checkpoint_table(std::uint64_t replica, const RunOutcome& outcome) {
  CsvTable t;
  t.header = {"replica", "t", "n", "M_n", "size_A", "max_level_A", "min_distance_A_to_B"};
  for (const auto& cp : outcome.checkpoints) {
    const std::size_t levels = std::max<std::size_t>(cp.level_counts.size(), 1);
    for (std::size_t n = 0; n < levels; ++n) {
      const std::uint64_t m = n < cp.level_counts.size() ? cp.level_counts[n] : 0;
      t.rows.push_back({format_number(replica), format_number(cp.time), format_number(std::uint64_t{n}),
                        format_number(m), format_number(cp.type1_size), optional_number(cp.max_level_type1),
                        optional_number(cp.min_distance)});
    }
  }
  return t;
}

void describe(const ExperimentConfig& cfg, RunMetadata& meta) {
  auto add = [&meta](std::string k, std::string v) { meta.params.emplace_back(std::move(k), std::move(v)); };
  add("d", std::to_string(cfg.d));
  add("lambda", join_numbers(cfg.lambdas));
  add("A0", join_vertices(cfg.initial.type1));
  add("B0", join_vertices(cfg.initial.type2));
  add("replicas", std::to_string(cfg.replicas));
  add("budget.max_time", cfg.budget.max_time ? format_number(*cfg.budget.max_time) : "");
  add("budget.max_level", cfg.budget.max_level ? std::to_string(*cfg.budget.max_level) : "");
  add("budget.max_events", cfg.budget.max_events ? std::to_string(*cfg.budget.max_events) : "");
  add("checkpoints", join_numbers(cfg.checkpoints));
  add("c_grid", join_numbers(cfg.c_grid));
  add("n_list", join_counts(cfg.n_list));
  add("t_list", join_numbers(cfg.t_list));
  add("n", std::to_string(cfg.n));
  add("c", format_number(cfg.c));
  add("m", std::to_string(cfg.m));
  add("threshold", format_number(cfg.threshold));
  add("m_list", join_counts(cfg.m_list));
  add("bracket", cfg.bracket ? format_number(cfg.bracket->first) + ";" + format_number(cfg.bracket->second) : "");
  add("tol", format_number(cfg.tol));
  add("max_depth", std::to_string(cfg.max_depth));
  add("prune", cfg.prune ? "true" : "false");
  add("require_nontrivial", cfg.require_nontrivial ? "true" : "false");
  meta.seed = cfg.seed;
  meta.seed_defaulted = cfg.seed_defaulted;
}

}  // namespace escape_lab
