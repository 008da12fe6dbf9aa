#pragma once

// Two-type escape dynamics on the homogeneous tree.
//
// Rates: a vacant vertex becomes type 1 at rate (#type-1 neighbours); a
// vacant or type-1 vertex becomes type 2 at rate lambda * (#type-2
// neighbours). Type 2 is absorbing.
//
// The chain is simulated event by event with two exponential clocks, one per
// category (type-1 colonisations, type-2 invasions), each driven by its own
// random stream. Within a category the firing edge is chosen uniformly from a
// swap-remove array of active directed edges, so every event costs O(d).
// The set of type-2 edges only changes at type-2 events, so the type-2 stream
// alone determines B(t): runs that share that stream have identical B paths
// whatever A(0) is.
//
// Pruning (on by default): once a type-2 vertex v separates a branch from
// every type-1 vertex, type 1 can never enter that branch, and type-2 growth
// inside it cannot influence A. Such edges are not added, and edges that
// become irrelevant are dropped lazily when they fire. This leaves the law of
// A(t) unchanged and keeps the work proportional to the contested region
// instead of the exponentially growing B. Disable it to simulate B in full.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "escape_lab/analytic.hpp"
#include "escape_lab/rng.hpp"
#include "escape_lab/tree.hpp"

namespace escape_lab {

enum class CellState : std::uint8_t { Vacant = 0, One = 1, Two = 2 };

const char* to_string(CellState s) noexcept;

struct InitialConfig {
  std::vector<VertexId> type1;  ///< A(0)
  std::vector<VertexId> type2;  ///< B(0)
};

/// Throws AddressError for invalid addresses and ConfigError when A(0) and B(0) overlap.
void validate_config(const InitialConfig& cfg, const TreeParams& p);

/// True iff some x in A(0) starts an infinite geodesic that avoids B(0).
bool validate_nontrivial(const InitialConfig& cfg, const TreeParams& p);

struct EscapeOptions {
  bool prune_irrelevant_type2 = true;
  /// Recompute edge tallies after every event and throw std::logic_error on mismatch.
  bool check_invariants = false;
};

struct EventRecord {
  double time = 0.0;
  std::uint32_t node = 0;  ///< arena index; see EscapeProcess::vertex
  CellState from = CellState::Vacant;
  CellState to = CellState::Vacant;
};

enum class StepKind { Event, Null, Terminal };

struct StepResult {
  StepKind kind = StepKind::Terminal;
  EventRecord event;
};

struct TallyCheck {
  bool ok = true;
  std::uint64_t expected_type1 = 0;
  std::uint64_t actual_type1 = 0;
  std::uint64_t expected_type2 = 0;
  std::uint64_t actual_type2 = 0;
  std::string detail;
};

class EscapeProcess {
 public:
  /// `seed` identifies the replica; the two clock streams are derived from it.
  EscapeProcess(const ModelParams& params, const InitialConfig& cfg, std::uint64_t seed,
                EscapeOptions opts = {});

  /// Advances to the next state change, skipping pruned no-op firings.
  /// Returns nullopt when no transition is possible.
  std::optional<EventRecord> step();

  /// Advances by exactly one clock firing, which may be a pruned no-op.
  StepResult step_once();

  /// Time of the next clock firing (sampling pending clocks if needed), +inf when terminal.
  double next_event_time();

  double clock() const noexcept { return clock_; }
  std::uint64_t events() const noexcept { return events_; }
  std::uint64_t null_events() const noexcept { return null_events_; }

  const ModelParams& params() const noexcept { return params_; }
  const EscapeOptions& options() const noexcept { return opts_; }

  std::uint64_t type1_count() const noexcept { return ones_; }
  std::uint64_t type2_count() const noexcept { return twos_; }
  /// M_n: type-1 vertices at level n.
  std::uint64_t count_type1(std::size_t level) const noexcept;
  std::span<const std::uint64_t> type1_level_counts() const noexcept { return level_ones_; }
  std::optional<std::size_t> max_level_type1() const noexcept;
  /// Deepest type-2 vertex in T+([root_branch]), counting a type-2 root as level 0.
  std::optional<std::size_t> max_level_type2_in_direction(std::size_t root_branch) const noexcept;

  /// Active directed edges per category (stale pruned edges included).
  std::uint64_t type1_edge_count() const noexcept { return type1_edges_.size(); }
  std::uint64_t type2_edge_count() const noexcept { return type2_edges_.size(); }
  double total_rate() const noexcept;

  CellState state(const VertexId& v) const;
  CellState node_state(std::uint32_t node) const noexcept { return nodes_[node].state; }
  VertexId vertex(std::uint32_t node) const;
  std::size_t node_level(std::uint32_t node) const noexcept { return nodes_[node].level; }
  std::size_t materialized_vertices() const noexcept { return nodes_.size(); }

  std::vector<VertexId> type1_vertices() const;
  std::vector<VertexId> type2_vertices() const;

  /// Rebuilds both edge tallies from the occupancy map and compares.
  TallyCheck verify_tallies() const;

  /// Graph distance between A(t) and B(t); nullopt when either is empty.
  std::optional<std::size_t> min_distance_type1_to_type2() const;

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t parent;
    std::uint32_t level;
    std::uint32_t branch;
    CellState state;
  };

  std::uint32_t create_child(std::uint32_t parent, std::uint32_t branch);
  std::uint32_t get_or_create(const VertexId& v);
  std::uint32_t neighbor(std::uint32_t v, std::uint32_t slot) const noexcept {
    return adjacency_[static_cast<std::size_t>(v) * slots_ + slot];
  }
  std::uint32_t materialize_neighbor(std::uint32_t v, std::uint32_t slot);
  std::uint32_t slot_count(std::uint32_t v) const noexcept;
  std::uint32_t slot_toward(std::uint32_t from, std::uint32_t to) const noexcept;
  std::uint64_t edge_code(std::uint32_t v, std::uint32_t slot) const noexcept {
    return static_cast<std::uint64_t>(v) * slots_ + slot;
  }
  bool type2_edge_relevant(std::uint32_t v, std::uint32_t slot) const noexcept;

  void add_edge(std::vector<std::uint64_t>& list, std::vector<std::int32_t>& pos, std::uint64_t code);
  void remove_edge(std::vector<std::uint64_t>& list, std::vector<std::int32_t>& pos, std::uint64_t code);

  void adjust_type1_counts(std::uint32_t v, int delta);
  void become_one(std::uint32_t v);
  void become_two(std::uint32_t v);
  void add_type2_out_edges(std::uint32_t v);
  void ensure_clocks();

  ModelParams params_;
  EscapeOptions opts_;
  std::uint32_t d_;
  std::uint32_t slots_;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> adjacency_;  // slots_ entries per node; slot d is the parent
  std::vector<std::int32_t> type1_pos_;   // position of each directed edge in type1_edges_, or -1
  std::vector<std::int32_t> type2_pos_;
  std::vector<std::uint64_t> type1_edges_;
  std::vector<std::uint64_t> type2_edges_;
  std::vector<std::uint32_t> ones_below_;  // type-1 vertices in T+(node)
  std::vector<std::uint64_t> level_ones_;
  std::vector<std::int64_t> max_two_level_;  // per root branch, then the root itself; -1 if none
  std::uint64_t ones_ = 0;
  std::uint64_t twos_ = 0;

  Engine type1_rng_;
  Engine type2_rng_;
  double clock_ = 0.0;
  double next_type1_ = 0.0;
  double next_type2_ = 0.0;
  bool type1_clock_set_ = false;
  bool type2_clock_set_ = false;
  std::uint64_t events_ = 0;
  std::uint64_t null_events_ = 0;
};

struct Budget {
  std::optional<double> max_time;
  std::optional<std::size_t> max_level;
  std::optional<std::uint64_t> max_events;

  bool any() const noexcept { return max_time || max_level || max_events; }
};

/// Declares escape once a type-1 vertex x reaches `level` while every type-2
/// vertex in x's root branch sits at level <= level(x) - delta * level.
struct EscapeHeuristic {
  std::size_t level = 0;
  double delta = 0.0;
};

struct Checkpoint {
  double time = 0.0;
  std::vector<std::uint64_t> level_counts;  ///< M_n for n = 0 .. max type-1 level
  std::uint64_t type1_size = 0;
  std::uint64_t type2_size = 0;
  std::optional<std::size_t> max_level_type1;
  std::optional<std::size_t> min_distance;
};

struct LoggedEvent {
  double time = 0.0;
  VertexId vertex;
  CellState from = CellState::Vacant;
  CellState to = CellState::Vacant;
};

enum class Outcome { Extinct, AliveAtBudget, EscapeDeclared };
enum class BudgetHit { None, Time, Level, Events, Terminal };

const char* to_string(Outcome o) noexcept;
const char* to_string(BudgetHit b) noexcept;

struct RunOptions {
  Budget budget;
  std::vector<double> checkpoints;
  EscapeOptions escape;
  std::optional<EscapeHeuristic> heuristic;
  /// Reject configurations whose type-1 cluster is surrounded by type 2.
  bool require_nontrivial = false;
  bool record_events = false;
  bool record_checkpoint_distance = true;
};

struct RunOutcome {
  Outcome outcome = Outcome::AliveAtBudget;
  BudgetHit budget_hit = BudgetHit::None;
  double time = 0.0;  ///< extinction time, or the clock when the budget stopped the run
  std::uint64_t events = 0;
  bool nontrivial = false;
  std::uint64_t final_type1 = 0;
  std::uint64_t final_type2 = 0;
  std::optional<std::size_t> final_max_level_type1;
  std::vector<Checkpoint> checkpoints;  ///< in increasing time order
  std::vector<LoggedEvent> event_log;
};

/// Runs until A(t) is empty or a budget is exhausted. Throws ConfigError when
/// no budget is set.
RunOutcome run(const InitialConfig& cfg, const ModelParams& params, std::uint64_t seed,
               const RunOptions& opts);

}  // namespace escape_lab
