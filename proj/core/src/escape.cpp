#include "escape_lab/escape.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include "escape_lab/errors.hpp"

namespace escape_lab {

const char* to_string(CellState s) noexcept {
  switch (s) {
    case CellState::Vacant: return "vacant";
    case CellState::One: return "one";
    case CellState::Two: return "two";
  }
  return "?";
}

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Extinct: return "Extinct";
    case Outcome::AliveAtBudget: return "AliveAtBudget";
    case Outcome::EscapeDeclared: return "EscapeDeclared";
  }
  return "?";
}

const char* to_string(BudgetHit b) noexcept {
  switch (b) {
    case BudgetHit::None: return "none";
    case BudgetHit::Time: return "time";
    case BudgetHit::Level: return "level";
    case BudgetHit::Events: return "events";
    case BudgetHit::Terminal: return "terminal";
  }
  return "?";
}

void validate_config(const InitialConfig& cfg, const TreeParams& p) {
  for (const auto& v : cfg.type1) require_valid(v, p);
  for (const auto& v : cfg.type2) require_valid(v, p);
  const std::set<VertexId> b(cfg.type2.begin(), cfg.type2.end());
  for (const auto& v : cfg.type1) {
    if (b.count(v)) {
      throw ConfigError("vertex '" + v.to_string() + "' is in both A0 and B0");
    }
  }
}

namespace {

class RayFinder {
 public:
  RayFinder(const InitialConfig& cfg, const TreeParams& p)
      : p_(p), blocked_(cfg.type2.begin(), cfg.type2.end()) {}

  // An infinite downward ray starting at v avoids B0.
  bool down_ray_free(const VertexId& v) const {
    if (blocked_.count(v)) return false;
    const bool subtree_clear = std::none_of(blocked_.begin(), blocked_.end(), [&](const VertexId& b) {
      return in_forward_subtree(v, b);
    });
    if (subtree_clear) return true;
    for (int c = 0; c < p_.branching(v.level()); ++c) {
      if (down_ray_free(v.child(static_cast<std::uint32_t>(c)))) return true;
    }
    return false;
  }

  // Every infinite geodesic from x climbs to some ancestor (possibly x itself)
  // and then descends forever through a branch not containing x.
  bool ray_from(const VertexId& x) const {
    for (int c = 0; c < p_.branching(x.level()); ++c) {
      if (down_ray_free(x.child(static_cast<std::uint32_t>(c)))) return true;
    }
    VertexId below = x;
    while (!below.is_root()) {
      VertexId up = below.parent();
      if (blocked_.count(up)) return false;
      for (int c = 0; c < p_.branching(up.level()); ++c) {
        const auto branch = static_cast<std::uint32_t>(c);
        if (branch == below.path().back()) continue;
        if (down_ray_free(up.child(branch))) return true;
      }
      below = std::move(up);
    }
    return false;
  }

 private:
  TreeParams p_;
  std::set<VertexId> blocked_;
};

}  // namespace

bool validate_nontrivial(const InitialConfig& cfg, const TreeParams& p) {
  validate_config(cfg, p);
  const RayFinder finder(cfg, p);
  return std::any_of(cfg.type1.begin(), cfg.type1.end(),
                     [&](const VertexId& x) { return finder.ray_from(x); });
}

// ---------------------------------------------------------------------------
// EscapeProcess

EscapeProcess::EscapeProcess(const ModelParams& params, const InitialConfig& cfg, std::uint64_t seed,
                             EscapeOptions opts)
    : params_(params),
      opts_(opts),
      d_(static_cast<std::uint32_t>(params.d())),
      slots_(d_ + 1),
      max_two_level_(d_ + 2, -1),
      type1_rng_(make_engine(derive_seed(seed, {1}))),
      type2_rng_(make_engine(derive_seed(seed, {2}))) {
  validate_config(cfg, params.tree());

  nodes_.push_back({kNone, 0, 0, CellState::Vacant});
  adjacency_.assign(slots_, kNone);
  type1_pos_.assign(slots_, -1);
  type2_pos_.assign(slots_, -1);
  ones_below_.push_back(0);

  std::vector<std::uint32_t> ones;
  std::vector<std::uint32_t> twos;
  for (const auto& v : cfg.type1) {
    const std::uint32_t id = get_or_create(v);
    if (nodes_[id].state == CellState::One) continue;
    nodes_[id].state = CellState::One;
    adjust_type1_counts(id, +1);
    ++ones_;
    ones.push_back(id);
  }
  for (const auto& v : cfg.type2) {
    const std::uint32_t id = get_or_create(v);
    if (nodes_[id].state == CellState::Two) continue;
    nodes_[id].state = CellState::Two;
    ++twos_;
    twos.push_back(id);
  }

  for (std::uint32_t v : ones) {
    for (std::uint32_t s = 0; s < slots_; ++s) {
      const std::uint32_t w = materialize_neighbor(v, s);
      if (nodes_[w].state == CellState::Vacant) add_edge(type1_edges_, type1_pos_, edge_code(v, s));
    }
  }
  for (std::uint32_t v : twos) {
    std::int64_t level = nodes_[v].level;
    std::uint32_t u = v;
    while (nodes_[u].level > 1) u = nodes_[u].parent;
    const std::size_t bucket = level == 0 ? d_ + 1 : nodes_[u].branch;
    max_two_level_[bucket] = std::max(max_two_level_[bucket], level);
    add_type2_out_edges(v);
  }
}

std::uint32_t EscapeProcess::create_child(std::uint32_t parent, std::uint32_t branch) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  if (id == kNone) throw ResourceError("escape process exceeded 2^32 materialised vertices");
  nodes_.push_back({parent, nodes_[parent].level + 1, branch, CellState::Vacant});
  adjacency_.resize(adjacency_.size() + slots_, kNone);
  type1_pos_.resize(type1_pos_.size() + slots_, -1);
  type2_pos_.resize(type2_pos_.size() + slots_, -1);
  ones_below_.push_back(0);
  adjacency_[static_cast<std::size_t>(parent) * slots_ + branch] = id;
  adjacency_[static_cast<std::size_t>(id) * slots_ + d_] = parent;
  return id;
}

std::uint32_t EscapeProcess::get_or_create(const VertexId& v) {
  std::uint32_t node = 0;
  for (std::uint32_t b : v.path()) {
    const std::uint32_t next = neighbor(node, b);
    node = next == kNone ? create_child(node, b) : next;
  }
  return node;
}

std::uint32_t EscapeProcess::materialize_neighbor(std::uint32_t v, std::uint32_t slot) {
  const std::uint32_t w = neighbor(v, slot);
  return w == kNone ? create_child(v, slot) : w;
}

std::uint32_t EscapeProcess::slot_count(std::uint32_t) const noexcept { return slots_; }

// Slots 0..d-1 are children; slot d is the parent, except at the root where it is child d.
std::uint32_t EscapeProcess::slot_toward(std::uint32_t from, std::uint32_t to) const noexcept {
  if (from != 0 && nodes_[from].parent == to) return d_;
  return nodes_[to].branch;
}

bool EscapeProcess::type2_edge_relevant(std::uint32_t v, std::uint32_t slot) const noexcept {
  if (v != 0 && slot == d_) return ones_ > ones_below_[v];
  const std::uint32_t w = neighbor(v, slot);
  return w != kNone && ones_below_[w] > 0;
}

void EscapeProcess::add_edge(std::vector<std::uint64_t>& list, std::vector<std::int32_t>& pos,
                             std::uint64_t code) {
  pos[code] = static_cast<std::int32_t>(list.size());
  list.push_back(code);
}

void EscapeProcess::remove_edge(std::vector<std::uint64_t>& list, std::vector<std::int32_t>& pos,
                                std::uint64_t code) {
  const std::int32_t at = pos[code];
  const std::uint64_t last = list.back();
  list[static_cast<std::size_t>(at)] = last;
  pos[last] = at;
  list.pop_back();
  pos[code] = -1;
}

void EscapeProcess::adjust_type1_counts(std::uint32_t v, int delta) {
  const std::size_t level = nodes_[v].level;
  if (level_ones_.size() <= level) level_ones_.resize(level + 1, 0);
  level_ones_[level] += static_cast<std::uint64_t>(static_cast<std::int64_t>(delta));
  for (std::uint32_t u = v; u != kNone; u = nodes_[u].parent) {
    ones_below_[u] += static_cast<std::uint32_t>(delta);
  }
  while (!level_ones_.empty() && level_ones_.back() == 0) level_ones_.pop_back();
}

void EscapeProcess::become_one(std::uint32_t v) {
  for (std::uint32_t s = 0; s < slots_; ++s) {
    const std::uint32_t w = materialize_neighbor(v, s);
    switch (nodes_[w].state) {
      case CellState::One:
        remove_edge(type1_edges_, type1_pos_, edge_code(w, slot_toward(w, v)));
        break;
      case CellState::Vacant:
        add_edge(type1_edges_, type1_pos_, edge_code(v, s));
        break;
      case CellState::Two:
        break;
    }
  }
  nodes_[v].state = CellState::One;
  adjust_type1_counts(v, +1);
  ++ones_;
}

void EscapeProcess::become_two(std::uint32_t v) {
  const CellState previous = nodes_[v].state;
  for (std::uint32_t s = 0; s < slots_; ++s) {
    const std::uint32_t w = neighbor(v, s);
    if (previous == CellState::One) {
      const std::uint64_t out = edge_code(v, s);
      if (type1_pos_[out] >= 0) remove_edge(type1_edges_, type1_pos_, out);
    }
    if (w == kNone) continue;
    const std::uint64_t in = edge_code(w, slot_toward(w, v));
    if (nodes_[w].state == CellState::One && previous == CellState::Vacant) {
      remove_edge(type1_edges_, type1_pos_, in);
    } else if (nodes_[w].state == CellState::Two && type2_pos_[in] >= 0) {
      remove_edge(type2_edges_, type2_pos_, in);
    }
  }
  if (previous == CellState::One) {
    adjust_type1_counts(v, -1);
    --ones_;
  }
  nodes_[v].state = CellState::Two;
  ++twos_;

  std::int64_t level = nodes_[v].level;
  std::uint32_t u = v;
  while (nodes_[u].level > 1) u = nodes_[u].parent;
  const std::size_t bucket = level == 0 ? d_ + 1 : nodes_[u].branch;
  max_two_level_[bucket] = std::max(max_two_level_[bucket], level);

  add_type2_out_edges(v);
}

void EscapeProcess::add_type2_out_edges(std::uint32_t v) {
  for (std::uint32_t s = 0; s < slots_; ++s) {
    if (opts_.prune_irrelevant_type2 && !type2_edge_relevant(v, s)) continue;
    const std::uint32_t w = materialize_neighbor(v, s);
    if (nodes_[w].state != CellState::Two) add_edge(type2_edges_, type2_pos_, edge_code(v, s));
  }
}

void EscapeProcess::ensure_clocks() {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!type1_clock_set_) {
    next_type1_ = type1_edges_.empty()
                      ? kInf
                      : clock_ + sample_exponential(type1_rng_, static_cast<double>(type1_edges_.size()));
    type1_clock_set_ = true;
  }
  if (!type2_clock_set_) {
    next_type2_ = type2_edges_.empty()
                      ? kInf
                      : clock_ + sample_exponential(type2_rng_, params_.lambda() *
                                                                    static_cast<double>(type2_edges_.size()));
    type2_clock_set_ = true;
  }
}

double EscapeProcess::next_event_time() {
  if (opts_.prune_irrelevant_type2 && ones_ == 0) return std::numeric_limits<double>::infinity();
  ensure_clocks();
  return std::min(next_type1_, next_type2_);
}

StepResult EscapeProcess::step_once() {
  StepResult out;
  const double next = next_event_time();
  if (std::isinf(next)) return out;

  if (next_type1_ <= next_type2_) {
    clock_ = next_type1_;
    type1_clock_set_ = false;
    const std::uint64_t code = type1_edges_[sample_index(type1_rng_, type1_edges_.size())];
    const auto v = static_cast<std::uint32_t>(code / slots_);
    const std::uint32_t w = neighbor(v, static_cast<std::uint32_t>(code % slots_));
    become_one(w);
    out.event = {clock_, w, CellState::Vacant, CellState::One};
  } else {
    clock_ = next_type2_;
    type2_clock_set_ = false;
    const std::uint64_t code = type2_edges_[sample_index(type2_rng_, type2_edges_.size())];
    const auto v = static_cast<std::uint32_t>(code / slots_);
    const auto slot = static_cast<std::uint32_t>(code % slots_);
    if (opts_.prune_irrelevant_type2 && !type2_edge_relevant(v, slot)) {
      remove_edge(type2_edges_, type2_pos_, code);
      ++null_events_;
      out.kind = StepKind::Null;
      out.event = {clock_, v, CellState::Two, CellState::Two};
      return out;
    }
    const std::uint32_t w = neighbor(v, slot);
    const CellState previous = nodes_[w].state;
    const std::size_t type1_before = type1_edges_.size();
    become_two(w);
    if (type1_edges_.size() != type1_before) type1_clock_set_ = false;
    out.event = {clock_, w, previous, CellState::Two};
  }
  ++events_;
  out.kind = StepKind::Event;
  if (opts_.check_invariants) {
    const TallyCheck check = verify_tallies();
    if (!check.ok) throw std::logic_error("edge tally mismatch after event: " + check.detail);
  }
  return out;
}

std::optional<EventRecord> EscapeProcess::step() {
  while (true) {
    const StepResult r = step_once();
    if (r.kind == StepKind::Event) return r.event;
    if (r.kind == StepKind::Terminal) return std::nullopt;
  }
}

std::uint64_t EscapeProcess::count_type1(std::size_t level) const noexcept {
  return level < level_ones_.size() ? level_ones_[level] : 0;
}

std::optional<std::size_t> EscapeProcess::max_level_type1() const noexcept {
  if (level_ones_.empty()) return std::nullopt;
  return level_ones_.size() - 1;
}

std::optional<std::size_t> EscapeProcess::max_level_type2_in_direction(std::size_t root_branch) const noexcept {
  std::int64_t best = max_two_level_[d_ + 1];
  if (root_branch <= d_) best = std::max(best, max_two_level_[root_branch]);
  if (best < 0) return std::nullopt;
  return static_cast<std::size_t>(best);
}

double EscapeProcess::total_rate() const noexcept {
  return static_cast<double>(type1_edges_.size()) +
         params_.lambda() * static_cast<double>(type2_edges_.size());
}

CellState EscapeProcess::state(const VertexId& v) const {
  require_valid(v, params_.tree());
  std::uint32_t node = 0;
  for (std::uint32_t b : v.path()) {
    node = neighbor(node, b);
    if (node == kNone) return CellState::Vacant;
  }
  return nodes_[node].state;
}

VertexId EscapeProcess::vertex(std::uint32_t node) const {
  std::vector<std::uint32_t> path(nodes_[node].level);
  for (std::uint32_t u = node; u != 0; u = nodes_[u].parent) path[nodes_[u].level - 1] = nodes_[u].branch;
  return VertexId{std::move(path)};
}

std::vector<VertexId> EscapeProcess::type1_vertices() const {
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].state == CellState::One) out.push_back(vertex(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> EscapeProcess::type2_vertices() const {
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].state == CellState::Two) out.push_back(vertex(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TallyCheck EscapeProcess::verify_tallies() const {
  TallyCheck out;
  out.actual_type1 = type1_edges_.size();
  out.actual_type2 = type2_edges_.size();
  auto fail = [&out](std::string msg) {
    if (out.ok) out.detail = std::move(msg);
    out.ok = false;
  };

  for (std::size_t i = 0; i < type1_edges_.size(); ++i) {
    if (type1_pos_[type1_edges_[i]] != static_cast<std::int32_t>(i)) fail("type-1 position index stale");
  }
  for (std::size_t i = 0; i < type2_edges_.size(); ++i) {
    const std::uint64_t code = type2_edges_[i];
    if (type2_pos_[code] != static_cast<std::int32_t>(i)) fail("type-2 position index stale");
    const auto v = static_cast<std::uint32_t>(code / slots_);
    const std::uint32_t w = neighbor(v, static_cast<std::uint32_t>(code % slots_));
    if (nodes_[v].state != CellState::Two || w == kNone || nodes_[w].state == CellState::Two) {
      fail("type-2 list holds an inactive edge");
    }
  }

  std::vector<std::uint32_t> below(nodes_.size(), 0);
  std::vector<std::uint64_t> per_level;
  std::uint64_t ones = 0;
  std::uint64_t twos = 0;
  for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
    const CellState st = nodes_[v].state;
    if (st == CellState::One) {
      ++ones;
      if (per_level.size() <= nodes_[v].level) per_level.resize(nodes_[v].level + 1, 0);
      ++per_level[nodes_[v].level];
      for (std::uint32_t u = v; u != kNone; u = nodes_[u].parent) ++below[u];
      for (std::uint32_t s = 0; s < slots_; ++s) {
        const std::uint32_t w = neighbor(v, s);
        if (w != kNone && nodes_[w].state != CellState::Vacant) continue;
        ++out.expected_type1;
        if (w == kNone || type1_pos_[edge_code(v, s)] < 0) fail("missing type-1 edge");
      }
    } else if (st == CellState::Two) {
      ++twos;
    }
  }
  if (out.expected_type1 != out.actual_type1) fail("type-1 tally differs from recomputation");
  if (ones != ones_ || twos != twos_) fail("occupancy totals differ from recomputation");
  if (below != ones_below_) fail("subtree type-1 counts differ from recomputation");
  if (per_level != level_ones_) fail("per-level type-1 counts differ from recomputation");

  // Type 2: with pruning the expected set is the relevant edges; stale entries
  // are allowed in the list as long as they are Two -> non-Two.
  for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].state != CellState::Two) continue;
    for (std::uint32_t s = 0; s < slots_; ++s) {
      const std::uint32_t w = neighbor(v, s);
      if (w != kNone && nodes_[w].state == CellState::Two) continue;
      if (opts_.prune_irrelevant_type2 && !type2_edge_relevant(v, s)) continue;
      ++out.expected_type2;
      if (w == kNone || type2_pos_[edge_code(v, s)] < 0) fail("missing type-2 edge");
    }
  }
  if (!opts_.prune_irrelevant_type2 && out.expected_type2 != out.actual_type2) {
    fail("type-2 tally differs from recomputation");
  }
  return out;
}

std::optional<std::size_t> EscapeProcess::min_distance_type1_to_type2() const {
  if (ones_ == 0 || twos_ == 0) return std::nullopt;
  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(nodes_.size(), kUnseen);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].state == CellState::One) {
      dist[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t s = 0; s < slots_; ++s) {
      const std::uint32_t w = neighbor(v, s);
      if (w == kNone || dist[w] != kUnseen) continue;
      if (nodes_[w].state == CellState::Two) return dist[v] + 1;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// run

namespace {

Checkpoint snapshot(const EscapeProcess& proc, double t, bool with_distance) {
  Checkpoint cp;
  cp.time = t;
  const auto levels = proc.type1_level_counts();
  cp.level_counts.assign(levels.begin(), levels.end());
  cp.type1_size = proc.type1_count();
  cp.type2_size = proc.type2_count();
  cp.max_level_type1 = proc.max_level_type1();
  if (with_distance) cp.min_distance = proc.min_distance_type1_to_type2();
  return cp;
}

}  // namespace

RunOutcome run(const InitialConfig& cfg, const ModelParams& params, std::uint64_t seed,
               const RunOptions& opts) {
  validate_config(cfg, params.tree());
  if (!opts.budget.any()) {
    throw ConfigError("run budget has no max_time, max_level or max_events; the run could not terminate");
  }
  if (opts.budget.max_time && !(*opts.budget.max_time >= 0.0)) {
    throw ConfigError("budget max_time must be >= 0");
  }
  std::vector<double> checkpoints = opts.checkpoints;
  for (double t : checkpoints) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("checkpoint times must be finite and >= 0");
  }
  std::sort(checkpoints.begin(), checkpoints.end());

  RunOutcome out;
  out.nontrivial = validate_nontrivial(cfg, params.tree());
  if (opts.require_nontrivial && !out.nontrivial) {
    throw ConfigError("initial configuration is trivial: every type-1 vertex is enclosed by type 2");
  }

  EscapeProcess proc(params, cfg, seed, opts.escape);
  std::size_t next_cp = 0;
  const double time_cap = opts.budget.max_time.value_or(std::numeric_limits<double>::infinity());
  auto flush_checkpoints = [&](double before) {
    while (next_cp < checkpoints.size() && checkpoints[next_cp] < before && checkpoints[next_cp] <= time_cap) {
      out.checkpoints.push_back(snapshot(proc, checkpoints[next_cp], opts.record_checkpoint_distance));
      ++next_cp;
    }
  };

  bool escaped = false;
  while (true) {
    if (proc.type1_count() == 0) {
      out.outcome = Outcome::Extinct;
      out.time = proc.clock();
      flush_checkpoints(std::numeric_limits<double>::infinity());
      break;
    }
    if (escaped) {
      out.outcome = Outcome::EscapeDeclared;
      out.time = proc.clock();
      break;
    }
    if (opts.budget.max_level && proc.max_level_type1().value_or(0) >= *opts.budget.max_level) {
      out.budget_hit = BudgetHit::Level;
      out.time = proc.clock();
      break;
    }
    if (opts.budget.max_events && proc.events() >= *opts.budget.max_events) {
      out.budget_hit = BudgetHit::Events;
      out.time = proc.clock();
      break;
    }
    const double next = proc.next_event_time();
    flush_checkpoints(next);
    if (next > time_cap) {
      out.budget_hit = std::isinf(next) ? BudgetHit::Terminal : BudgetHit::Time;
      out.time = std::isinf(time_cap) ? proc.clock() : time_cap;
      break;
    }
    const StepResult r = proc.step_once();
    if (r.kind == StepKind::Terminal) {
      out.budget_hit = BudgetHit::Terminal;
      out.time = proc.clock();
      break;
    }
    if (r.kind != StepKind::Event) continue;
    if (opts.record_events) {
      out.event_log.push_back({r.event.time, proc.vertex(r.event.node), r.event.from, r.event.to});
    }
    if (opts.heuristic && r.event.to == CellState::One) {
      const std::size_t level = proc.node_level(r.event.node);
      if (level > 0 && level >= opts.heuristic->level) {
        const VertexId x = proc.vertex(r.event.node);
        const auto deepest = proc.max_level_type2_in_direction(x.path().front());
        const double lag_limit = static_cast<double>(level) -
                                 opts.heuristic->delta * static_cast<double>(opts.heuristic->level);
        escaped = !deepest || static_cast<double>(*deepest) <= lag_limit;
      }
    }
  }

  out.events = proc.events();
  out.final_type1 = proc.type1_count();
  out.final_type2 = proc.type2_count();
  out.final_max_level_type1 = proc.max_level_type1();
  return out;
}

}  // namespace escape_lab
