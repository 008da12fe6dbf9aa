// Acceptance suite. `acceptance` runs every criterion; `acceptance N` runs one.
// Each prints "criterion N: PASS|FAIL <detail>"; the exit status is nonzero
// when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "escape_lab/analytic.hpp"
#include "escape_lab/erlang.hpp"
#include "escape_lab/escape.hpp"
#include "escape_lab/experiments.hpp"
#include "escape_lab/tree.hpp"

using namespace escape_lab;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Independent root oracle: scan a grid of the given step for the sign change,
// then bisect inside the bracketing cell.
template <typename F>
double grid_root(F f, double lo, double hi, double step) {
  double x0 = lo;
  double f0 = f(x0);
  for (double x1 = lo + step; x1 <= hi; x1 += step) {
    const double f1 = f(x1);
    if ((f0 > 0) != (f1 > 0)) {
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (x0 + x1);
        const double fm = f(mid);
        if ((fm > 0) == (f0 > 0)) {
          x0 = mid;
          f0 = fm;
        } else {
          x1 = mid;
        }
      }
      return 0.5 * (x0 + x1);
    }
    x0 = x1;
    f0 = f1;
  }
  return std::nan("");
}

Verdict analytic_identities() {
  const double l2 = lambda_critical(2);
  const double l3 = lambda_critical(3);
  bool ok = std::abs(l2 - 5.8284271247) <= 1e-9 && std::abs(l3 - 9.8989794856) <= 1e-9;
  double worst_min = 0.0;
  double worst_jump = 0.0;
  for (int d : {2, 3, 4, 5}) {
    for (double lambda : {1.5, 2.0, 4.0, 8.0, 20.0}) {
      const ModelParams p(d, lambda);
      const double c0 = (lambda + 1) / 2;
      const double closed = std::log((lambda + 1) * (lambda + 1) / (4 * lambda * d));
      worst_min = std::max(worst_min, std::abs(growth_profile_g(c0, p) - closed));
      for (double c : {1.0, lambda}) {
        const double at = growth_profile_g(c, p);
        worst_jump = std::max(worst_jump, std::abs(at - growth_profile_g(std::nextafter(c, 0.0), p)));
        worst_jump = std::max(worst_jump, std::abs(at - growth_profile_g(std::nextafter(c, 1e9), p)));
      }
    }
  }
  ok = ok && worst_min <= 1e-12 && worst_jump <= 1e-12;
  std::ostringstream s;
  s.precision(12);
  s << "lambda_c(2)=" << l2 << " lambda_c(3)=" << l3 << " max|g(c0)-closed|=" << worst_min
    << " max jump at 1,lambda=" << worst_jump;
  return {ok, s.str()};
}

Verdict root_finding() {
  const auto speeds = richardson_speeds(2);
  const ModelParams p(2, 2.0);
  const auto band = escape_band(p);
  if (!band) return {false, "no survival band at lambda=2"};
  const double res = std::max({std::abs(rate_function_f(speeds.a, 2)), std::abs(rate_function_f(speeds.b, 2)),
                               std::abs(growth_profile_g(band->r1, p)), std::abs(growth_profile_g(band->r2, p))});
  const auto f = [](double c) { return rate_function_f(c, 2); };
  const double oa = grid_root(f, 1e-3, 1.0, 1e-6);
  const double ob = grid_root(f, 1.0, 10.0, 1e-6);
  const double err = std::max(std::abs(oa - speeds.a), std::abs(ob - speeds.b));
  const bool ok = res <= 1e-10 && err <= 1e-5;
  std::ostringstream s;
  s.precision(10);
  s << "a=" << speeds.a << " b=" << speeds.b << " r1=" << band->r1 << " r2=" << band->r2 << " max residual=" << res
    << " oracle a=" << oa << " b=" << ob << " max diff=" << err;
  return {ok, s.str()};
}

Verdict erlang_oracle() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.n_list = {12};
  cfg.c_grid = {1.5, 0.8};
  cfg.replicas = 200;
  cfg.seed = kSeed;
  const auto result = richardson_counts(cfg);
  const LevelCountSummary* occ = nullptr;
  const LevelCountSummary* vac = nullptr;
  for (const auto& s : result.summary) {
    if (s.c == 1.5) occ = &s;
    if (s.c == 0.8) vac = &s;
  }
  if (!occ || !vac) return {false, "summary rows missing"};
  const double exact_occ = static_cast<double>(sphere_size(12, TreeParams{2})) * erlang_cdf(12, 1.0, 8.0);
  const bool ok = std::abs(occ->expected_occupied - exact_occ) <= 1e-9 * exact_occ &&
                  std::abs(occ->z_occupied) <= 3.0 && std::abs(vac->z_vacant) <= 3.0;
  return {ok, "N_12(8) mean=" + fmt(occ->occupied.mean) + " exact=" + fmt(exact_occ) + " z=" +
                  fmt(occ->z_occupied) + "; F_12(15) mean=" + fmt(vac->vacant.mean) +
                  " exact=" + fmt(vac->expected_vacant) + " z=" + fmt(vac->z_vacant)};
}

Verdict exponent_convergence() {
  const TreeParams p{2};
  bool ok = true;
  std::string detail;
  for (double c : {1.5, 2.0, 3.0}) {
    double prev = std::numeric_limits<double>::infinity();
    detail += "c=" + fmt(c) + ":";
    for (std::uint64_t n : {100u, 500u, 2000u}) {
      const double err = std::abs(log_expected_occupied(n, c, p) / static_cast<double>(n) + rate_function_f(c, 2));
      ok = ok && err < prev;
      prev = err;
      detail += " " + fmt(err);
    }
    ok = ok && prev <= 0.05;
    detail += "; ";
  }
  return {ok, "errors at n=100,500,2000 " + detail};
}

Verdict superadditivity() {
  const ModelParams p(2, 2.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (double c : {0.5, 1.0, 1.5, 2.0, 5.0}) {
    for (std::uint64_t m = 1; m <= 30; ++m) {
      for (std::uint64_t n = 1; n <= 30; ++n) {
        const double gap = log_exclusive_probability_u(m, c, p) + log_exclusive_probability_u(n, c, p) -
                           log_exclusive_probability_u(m + n, c, p);
        worst = std::max(worst, gap);
      }
    }
  }
  return {worst <= 0.0, "max log(u_m u_n / u_{m+n}) over 4500 cases = " + fmt(worst)};
}

Verdict exclusive_count() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.lambdas = {2.0};
  cfg.n = 10;
  cfg.c = 1.2;
  cfg.replicas = 500;
  cfg.seed = kSeed;
  const auto r = exclusive_count_experiment(cfg);
  return {std::abs(r.z) <= 3.0, "V_10(10/1.2) mean=" + fmt(r.sample.mean) + " se=" + fmt(r.sample.stderr_mean()) +
                                    " exact=" + fmt(r.exact) + " z=" + fmt(r.z)};
}

Verdict phase_direction() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.lambdas = {2.0, 12.0};
  cfg.initial = InitialConfig{{VertexId::root()}, {VertexId::parse("0")}};
  cfg.budget = Budget{std::nullopt, std::size_t{30}, std::nullopt};
  cfg.replicas = 200;
  cfg.seed = kSeed;
  const auto curve = survival_scan(cfg);
  const auto& low = curve.rows[0];
  const auto& high = curve.rows[1];
  const double gap = low.survival_frequency - high.survival_frequency;
  const double extinct_high = static_cast<double>(high.extinct) / static_cast<double>(high.replicas);
  const bool ok = gap > 0.5 && extinct_high > 0.95;
  return {ok, "survival lambda=2: " + fmt(low.survival_frequency) + " [" + fmt(low.survival_ci.low) + ", " +
                  fmt(low.survival_ci.high) + "], lambda=12: " + fmt(high.survival_frequency) +
                  "; gap=" + fmt(gap) + " (need > 0.5), extinction at 12=" + fmt(extinct_high) + " (need > 0.95)"};
}

Verdict gw_offspring() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.m = 6;
  cfg.threshold = 0.9;
  cfg.replicas = 10000;
  cfg.seed = kSeed;
  const auto row = gw_offspring_richardson(cfg);
  const double oracle = 64.0 * erlang_cdf(6, 1.0, 0.9 * 6);
  const bool ok = std::abs(row.oracle - oracle) <= 1e-9 * oracle && std::abs(row.z) <= 3.0;
  return {ok, "mean=" + fmt(row.sample.mean) + " se=" + fmt(row.sample.stderr_mean()) + " oracle=" + fmt(oracle) +
                  " z=" + fmt(row.z)};
}

Verdict containment() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.lambdas = {12.0};
  cfg.t_list = {4.0, 8.0, 12.0};
  cfg.replicas = 200;
  cfg.seed = kSeed;
  const auto rows = containment_experiment(cfg);
  bool ok = rows.size() == 3;
  std::string detail = "violation frequency:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " t=" + fmt(rows[i].t) + " " + fmt(rows[i].frequency);
    if (i > 0) ok = ok && rows[i].frequency <= rows[i - 1].frequency;
  }
  ok = ok && rows.back().frequency < 0.1;
  return {ok, detail};
}

Verdict invariants() {
  std::vector<std::string> failures;

  const TreeParams tree{2};
  std::mt19937_64 rng{kSeed};
  auto random_vertex = [&] {
    std::vector<std::uint32_t> path;
    const std::size_t level = rng() % 13;
    for (std::size_t k = 0; k < level; ++k) {
      path.push_back(static_cast<std::uint32_t>(rng() % static_cast<std::uint64_t>(tree.branching(k))));
    }
    return VertexId{path};
  };
  std::uint64_t metric_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = random_vertex();
    const auto y = random_vertex();
    const auto z = random_vertex();
    const bool good = distance(x, x) == 0 && distance(x, y) == distance(y, x) && (distance(x, y) == 0) == (x == y) &&
                      distance(x, z) <= distance(x, y) + distance(y, z);
    metric_bad += !good;
  }
  if (metric_bad) failures.push_back(std::to_string(metric_bad) + " metric violations");

  const ModelParams params(2, 2.0);
  std::uint64_t log_bad = 0;
  std::uint64_t events_checked = 0;
  std::uint64_t rerun_bad = 0;
  std::uint64_t tally_bad = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const std::uint64_t seed = derive_seed(kSeed, {r});
    InitialConfig cfg{{VertexId::root()}, {VertexId::parse(std::to_string(r % 3))}};
    if (r % 2) cfg.type1.push_back(VertexId::parse("1.1"));
    if (r % 2 && r % 3 == 1) cfg.type2.front() = VertexId::parse("2");
    RunOptions opts;
    opts.budget.max_events = 2000;
    opts.budget.max_level = 20;
    opts.record_events = true;
    opts.escape.check_invariants = true;
    opts.escape.prune_irrelevant_type2 = r % 4 != 0;
    RunOutcome out;
    try {
      out = run(cfg, params, seed, opts);
    } catch (const std::logic_error&) {
      ++tally_bad;
      continue;
    }
    std::set<VertexId> ones(cfg.type1.begin(), cfg.type1.end());
    std::set<VertexId> twos(cfg.type2.begin(), cfg.type2.end());
    for (const auto& e : out.event_log) {
      ++events_checked;
      const CellState before = twos.count(e.vertex)   ? CellState::Two
                               : ones.count(e.vertex) ? CellState::One
                                                      : CellState::Vacant;
      // Allowed: vacant -> 1, vacant -> 2, 1 -> 2. Nothing leaves type 2, so B only grows.
      const bool legal = before == e.from && before != CellState::Two && e.to != CellState::Vacant &&
                         !(before == CellState::One && e.to == CellState::One);
      if (!legal) ++log_bad;
      if (e.to == CellState::One) {
        ones.insert(e.vertex);
      } else {
        ones.erase(e.vertex);
        twos.insert(e.vertex);
      }
    }
    if (ones.size() != out.final_type1 || twos.size() != out.final_type2) ++log_bad;

    const auto again = run(cfg, params, seed, opts);
    bool same = again.event_log.size() == out.event_log.size() && again.outcome == out.outcome;
    for (std::size_t i = 0; same && i < out.event_log.size(); ++i) {
      same = again.event_log[i].time == out.event_log[i].time && again.event_log[i].vertex == out.event_log[i].vertex &&
             again.event_log[i].to == out.event_log[i].to;
    }
    rerun_bad += !same;
  }
  if (log_bad) failures.push_back(std::to_string(log_bad) + " event-log violations");
  if (tally_bad) failures.push_back(std::to_string(tally_bad) + " runs with tally mismatches");
  if (rerun_bad) failures.push_back(std::to_string(rerun_bad) + " non-identical reruns");

  ExperimentConfig scan;
  scan.lambdas = {2.0, 6.0};
  scan.replicas = 40;
  scan.budget = Budget{std::nullopt, std::size_t{10}, std::nullopt};
  scan.seed = kSeed;
  scan.workers = 1;
  const auto first = to_csv_text(to_table(survival_scan(scan)));
  scan.workers = 4;
  const auto second = to_csv_text(to_table(survival_scan(scan)));
  if (first != second) failures.push_back("survival CSV differs between reruns");

  std::string detail = "10000 triples, 100 runs, " + std::to_string(events_checked) + " logged events";
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{
      analytic_identities, root_finding, erlang_oracle, exponent_convergence, superadditivity,
      exclusive_count,     phase_direction, gw_offspring, containment,         invariants};

  std::vector<std::size_t> selected;
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k - 1));
  } else {
    for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
  }

  int failed = 0;
  for (std::size_t i : selected) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << i + 1 << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail << " ("
              << fmt(secs) << " s)" << std::endl;
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
