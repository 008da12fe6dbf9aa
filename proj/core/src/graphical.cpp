#include "escape_lab/graphical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "escape_lab/errors.hpp"
#include "escape_lab/rng.hpp"

namespace escape_lab {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

void require_time(const PercolationStructure& perc, double t) {
  if (!(t >= 0.0) || t > perc.horizon()) {
    throw DomainError("evaluation time must lie in [0, horizon]");
  }
}

std::vector<std::uint32_t> indices_of(const std::vector<VertexId>& vs, const PercolationStructure& perc) {
  std::vector<std::uint32_t> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(perc.index_of(v));
  return out;
}

// Earliest arrival along time-increasing arrow paths. Arrows are processed in
// time order, so one pass suffices.
template <typename Keep>
std::vector<double> earliest_arrival(const std::vector<std::uint32_t>& sources, const PercolationStructure& perc,
                                     double t, Keep keep) {
  std::vector<double> arrival(perc.size(), kNever);
  for (std::uint32_t s : sources) arrival[s] = 0.0;
  for (const Arrow& a : perc.arrows()) {
    if (a.time > t) break;
    if (!keep(a)) continue;
    if (arrival[a.from] <= a.time && a.time < arrival[a.to]) arrival[a.to] = a.time;
  }
  return arrival;
}

GraphicalSets collect(const PercolationStructure& perc, const std::vector<double>& type1_time,
                      const std::vector<double>& type2_time, double t) {
  GraphicalSets out;
  for (std::uint32_t i = 0; i < perc.size(); ++i) {
    const bool in_b = type2_time[i] <= t;
    const bool in_a = !in_b && type1_time[i] <= t;
    if (in_b) out.type2.push_back(perc.vertex(i));
    if (in_a) out.type1.push_back(perc.vertex(i));
    if ((in_a || in_b) && perc.level_of(i) == perc.region_level()) out.truncated = true;
  }
  std::sort(out.type1.begin(), out.type1.end());
  std::sort(out.type2.begin(), out.type2.end());
  return out;
}

}  // namespace

PercolationStructure PercolationStructure::sample(const ModelParams& params, double horizon,
                                                  std::size_t region_level, std::uint64_t seed,
                                                  std::uint64_t max_vertices) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and >= 0");
  const TreeParams& tree = params.tree();
  const std::uint64_t size = disk_size(region_level, tree);
  if (size > max_vertices) {
    throw ResourceError("region of level " + std::to_string(region_level) + " holds " + std::to_string(size) +
                        " vertices; limit is " + std::to_string(max_vertices));
  }

  PercolationStructure perc(params, horizon, region_level);
  for (std::size_t k = 0; k <= region_level; ++k) {
    perc.level_offset_.push_back(perc.vertices_.size());
    for (auto& v : enumerate_sphere(k, tree)) perc.vertices_.push_back(std::move(v));
  }

  // Arrow streams are keyed by (seed, head index, tail index, kind) so the
  // structure does not depend on enumeration order of edges.
  const double u_rate = params.lambda() - 1.0;
  for (std::uint32_t child = 1; child < perc.vertices_.size(); ++child) {
    const std::uint32_t parent = perc.index_of(perc.vertices_[child].parent());
    for (const auto& [from, to] : {std::pair{parent, child}, std::pair{child, parent}}) {
      for (int kind = 0; kind < 2; ++kind) {
        Engine rng = make_engine(derive_seed(seed, {from, to, static_cast<std::uint64_t>(kind)}));
        const bool type1 = kind == 0;
        std::vector<double> times;
        sample_poisson_times(rng, type1 ? 1.0 : u_rate, horizon, std::back_inserter(times));
        for (double at : times) perc.arrows_.push_back({at, from, to, type1});
      }
    }
  }
  std::sort(perc.arrows_.begin(), perc.arrows_.end(),
            [](const Arrow& a, const Arrow& b) { return a.time < b.time; });
  return perc;
}

std::uint32_t PercolationStructure::index_of(const VertexId& v) const {
  require_valid(v, params_.tree());
  if (v.level() > region_level_) {
    throw AddressError("vertex '" + v.to_string() + "' lies outside the region of level " +
                       std::to_string(region_level_));
  }
  return static_cast<std::uint32_t>(level_offset_[v.level()] + level_index(v, params_.tree()));
}

GraphicalSets graphical_build(const InitialConfig& cfg, const PercolationStructure& perc, double t) {
  validate_config(cfg, perc.params().tree());
  require_time(perc, t);
  const auto a0 = indices_of(cfg.type1, perc);
  const auto b0 = indices_of(cfg.type2, perc);

  // Arrow erasure: an arrow survives iff its tail is reachable from an
  // occupied starting point before the arrow fires.
  std::vector<std::uint32_t> occupied = a0;
  occupied.insert(occupied.end(), b0.begin(), b0.end());
  const auto from_occupied = earliest_arrival(occupied, perc, t, [](const Arrow&) { return true; });
  auto kept = [&](const Arrow& a) { return from_occupied[a.from] <= a.time; };

  const auto type2_time = earliest_arrival(b0, perc, t, kept);
  const auto type1_time = earliest_arrival(a0, perc, t, [&](const Arrow& a) { return a.type1 && kept(a); });
  return collect(perc, type1_time, type2_time, t);
}

GraphicalSets graphical_build(const InitialConfig& cfg, const ModelParams& params, double horizon_t,
                              std::size_t region_level, std::uint64_t seed) {
  const auto perc = PercolationStructure::sample(params, horizon_t, region_level, seed);
  return graphical_build(cfg, perc, horizon_t);
}

GraphicalSets replay_arrows(const InitialConfig& cfg, const PercolationStructure& perc, double t) {
  validate_config(cfg, perc.params().tree());
  require_time(perc, t);
  std::vector<CellState> state(perc.size(), CellState::Vacant);
  std::vector<double> type1_time(perc.size(), kNever);
  std::vector<double> type2_time(perc.size(), kNever);
  for (std::uint32_t i : indices_of(cfg.type1, perc)) {
    state[i] = CellState::One;
    type1_time[i] = 0.0;
  }
  for (std::uint32_t i : indices_of(cfg.type2, perc)) {
    state[i] = CellState::Two;
    type2_time[i] = 0.0;
  }
  for (const Arrow& a : perc.arrows()) {
    if (a.time > t) break;
    if (state[a.from] == CellState::Two && state[a.to] != CellState::Two) {
      state[a.to] = CellState::Two;
      type2_time[a.to] = a.time;
    } else if (a.type1 && state[a.from] == CellState::One && state[a.to] == CellState::Vacant) {
      state[a.to] = CellState::One;
      type1_time[a.to] = a.time;
    }
  }
  return collect(perc, type1_time, type2_time, t);
}

std::vector<VertexId> arrow_reachable(const std::vector<VertexId>& sources, const PercolationStructure& perc,
                                      double t, bool type1_only) {
  require_time(perc, t);
  const auto arrival =
      earliest_arrival(indices_of(sources, perc), perc, t, [type1_only](const Arrow& a) { return a.type1 || !type1_only; });
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i < perc.size(); ++i) {
    if (arrival[i] <= t) out.push_back(perc.vertex(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CrossValidation cross_validate(const ModelParams& params, std::uint64_t instances, std::size_t max_region_level,
                               double max_horizon, std::uint64_t seed) {
  if (max_region_level < 2) throw DomainError("cross validation needs region level >= 2");
  CrossValidation out;
  const TreeParams& tree = params.tree();
  for (std::uint64_t i = 0; i < instances; ++i) {
    Engine rng = make_engine(derive_seed(seed, {i}));
    const std::size_t region = 2 + sample_index(rng, max_region_level - 1);
    const double horizon = max_horizon * sample_unit(rng);

    // Random disjoint A(0), B(0) within distance 2 of the root.
    const std::size_t near = std::min<std::size_t>(2, region - 1);
    std::vector<VertexId> pool;
    for (std::size_t k = 0; k <= near; ++k) {
      for (auto& v : enumerate_sphere(k, tree)) pool.push_back(std::move(v));
    }
    for (std::size_t k = pool.size(); k > 1; --k) std::swap(pool[k - 1], pool[sample_index(rng, k)]);
    const std::size_t n_a = 1 + sample_index(rng, 2);
    const std::size_t n_b = 1 + sample_index(rng, 2);
    InitialConfig cfg;
    cfg.type1.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_a));
    cfg.type2.assign(pool.begin() + static_cast<std::ptrdiff_t>(n_a),
                     pool.begin() + static_cast<std::ptrdiff_t>(n_a + n_b));

    const auto perc = PercolationStructure::sample(params, horizon, region, derive_seed(seed, {i, 1}));
    const auto paths = graphical_build(cfg, perc, horizon);
    const auto dynamics = replay_arrows(cfg, perc, horizon);
    ++out.instances;
    if (paths.type1 == dynamics.type1) ++out.type1_agree;
    if (paths.type2 == dynamics.type2) ++out.type2_agree;
    if (paths.truncated || dynamics.truncated) ++out.truncated;
  }
  return out;
}

}  // namespace escape_lab
