#pragma once

// Monte Carlo harness. Replica r of an experiment with master seed s uses the
// seed derive_seed(s, {r}); replicas run on a pool of threads and their
// results are stored by index, then folded in index order. The output is
// therefore identical for any worker count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "escape_lab/config.hpp"
#include "escape_lab/csv.hpp"
#include "escape_lab/escape.hpp"
#include "escape_lab/stats.hpp"

namespace escape_lab {

/// Worker count for `requested` (0 = hardware concurrency), capped by the job count.
unsigned resolve_workers(unsigned requested, std::uint64_t jobs) noexcept;

/// Evaluates fn(i) for i in [0, count) on `workers` threads; results keep index order.
/// The first exception thrown by any job is rethrown after all threads join.
template <typename Fn>
auto parallel_map(std::uint64_t count, unsigned workers, Fn fn) -> std::vector<decltype(fn(std::uint64_t{}))> {
  using R = decltype(fn(std::uint64_t{}));
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::uint64_t i = next++; i < count && !failed; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned n = resolve_workers(workers, count);
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) noexcept;

// Survival -------------------------------------------------------------------

struct SurvivalRow {
  double lambda = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t extinct = 0;
  std::uint64_t alive_at_budget = 0;  ///< censored runs, counted as survival
  std::uint64_t escape_declared = 0;
  double survival_frequency = 0.0;
  Interval survival_ci;
  double mean_extinction_time = 0.0;  ///< over extinct runs; nan when none
  bool nontrivial = false;
};

struct SurvivalCurve {
  std::vector<SurvivalRow> rows;
  Budget budget;
};

/// One row per lambda in cfg.lambdas. Uses cfg.initial, cfg.budget, cfg.replicas, cfg.prune.
SurvivalCurve survival_scan(const ExperimentConfig& cfg);

/// Survival row for a single lambda.
SurvivalRow survival_at(const ExperimentConfig& cfg, double lambda);

CsvTable to_table(const SurvivalCurve& curve);

// Critical value ------------------------------------------------------------

struct CriticalEstimate {
  double low = 0.0;
  double high = 0.0;
  double frequency_low = 0.0;   ///< at the original bracket ends
  double frequency_high = 0.0;
  double threshold = 0.0;
  bool non_monotone = false;    ///< some evaluation contradicted the ordering beyond noise
  std::vector<SurvivalRow> evaluations;  ///< in evaluation order
};

/// Bisection on lambda inside cfg.bracket using the survival frequency
/// threshold (f(low) + f(high)) / 2, until the interval is narrower than
/// cfg.tol. Throws DomainError when the bracket does not contain
/// lambda_critical(d).
CriticalEstimate critical_estimate(const ExperimentConfig& cfg);

CsvTable to_table(const CriticalEstimate& est);

// Growth profile ------------------------------------------------------------

struct ProfileRow {
  double c = 0.0;
  std::size_t n = 0;
  double time = 0.0;  ///< n / c
  std::uint64_t replicas = 0;
  std::uint64_t surviving = 0;
  Summary conditional;    ///< M_n(n/c) over runs alive at the end
  Summary unconditional;  ///< M_n(n/c) over all runs
  double empirical_exponent = 0.0;  ///< log(conditional mean) / n
  double analytic_exponent = 0.0;   ///< -g(c)
  double upper_bound = 0.0;         ///< exp(-n g(c) + 0.1 n)
  std::string status;               ///< "ok", "insufficient-data" or "zero-mean"
};

/// Runs cfg.replicas escape runs at cfg.lambda() with a time budget of
/// max(n/c) and records M_n at every n/c. A run counts as surviving when A is
/// nonempty at the end of the run.
std::vector<ProfileRow> profile_estimate(const ExperimentConfig& cfg);

CsvTable to_table(const std::vector<ProfileRow>& rows);

// Richardson level counts ---------------------------------------------------

struct LevelCountRow {
  std::uint64_t replica = 0;
  std::size_t n = 0;
  double c = 0.0;
  std::uint64_t occupied = 0;
  std::uint64_t vacant = 0;
};

struct LevelCountSummary {
  std::size_t n = 0;
  double c = 0.0;
  Summary occupied;
  Summary vacant;
  double expected_occupied = 0.0;
  double expected_vacant = 0.0;
  double z_occupied = 0.0;
  double z_vacant = 0.0;
};

struct LevelCountResult {
  std::vector<LevelCountRow> rows;  ///< replica-major, then n, then c
  std::vector<LevelCountSummary> summary;
};

/// Rate-1 Richardson fields to level max(n_list); N_n(n/c) and F_n(n/c) for
/// every (n, c) against the exact expectations.
LevelCountResult richardson_counts(const ExperimentConfig& cfg);

CsvTable to_table(const LevelCountResult& result);
CsvTable summary_table(const LevelCountResult& result);

// Containment ---------------------------------------------------------------

struct ContainmentRow {
  double t = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t violations = 0;
  double frequency = 0.0;
  Interval ci;
};

/// Per replica, independent rate-1 and rate-lambda fields; a violation at t
/// means R_1(t) is not inside R_lambda(t). Throws ResourceError when
/// t * b(d) exceeds cfg.max_depth.
std::vector<ContainmentRow> containment_experiment(const ExperimentConfig& cfg);

CsvTable to_table(const std::vector<ContainmentRow>& rows);

// Exclusive count -----------------------------------------------------------

struct ExclusiveCountResult {
  std::size_t n = 0;
  double c = 0.0;
  double lambda = 0.0;
  Summary sample;
  double exact = 0.0;
  double z = 0.0;
};

/// V_n(n/c): vertices at level n reached by the rate-1 field and not by the
/// independent rate-lambda field by time n/c.
ExclusiveCountResult exclusive_count_experiment(const ExperimentConfig& cfg);

CsvTable to_table(const ExclusiveCountResult& result);

// Offspring means -----------------------------------------------------------

struct OffspringRow {
  std::string variant;  ///< "richardson" or "escape"
  std::size_t m = 0;
  double threshold = 0.0;  ///< richardson: step threshold; escape: 1/c
  std::uint64_t replicas = 0;
  Summary sample;
  double oracle = 0.0;       ///< exact mean (richardson), nan for escape
  double z = 0.0;            ///< nan for escape
  double log_rate = 0.0;     ///< log(mean) / m
  double target_rate = 0.0;  ///< richardson: log(oracle)/m, escape: -g(c)
};

/// Richardson: Z_1(x) for x = [0] with stride cfg.m and cfg.threshold.
OffspringRow gw_offspring_richardson(const ExperimentConfig& cfg);

/// Escape: A(0) = {[0]}, B(0) = {root}; counts type-1 vertices m levels below
/// [0] at time m / cfg.c, for each m in cfg.m_list.
std::vector<OffspringRow> gw_offspring_escape(const ExperimentConfig& cfg);

CsvTable to_table(const std::vector<OffspringRow>& rows);

// Single escape runs ----------------------------------------------------------

/// Checkpoint rows: replica, t, n, M_n, |A|, max_level_A, min_distance_A_to_B.
CsvTable checkpoint_table(std::uint64_t replica, const RunOutcome& outcome);

/// Appends the common parameters (d, lambda grid, initial sets, budget, replicas) to meta.
void describe(const ExperimentConfig& cfg, RunMetadata& meta);

}  // namespace escape_lab
