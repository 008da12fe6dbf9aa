#pragma once

// Percolation-structure realisation of the escape process on a finite disk.
//
// Every ordered pair of neighbours (x, y) inside the region carries two
// independent Poisson arrow streams on [0, horizon]: "T" arrows at rate 1
// and "U" arrows at rate lambda - 1. Two readings of the same arrows are
// provided:
//
//  * graphical_build: the path definitions. y is in B(t) iff a directed
//    path (any arrows) runs from B(0) to (y, t); y is in A(t) iff y is not in
//    B(t) and a T-arrow path runs from A(0) to (y, t). Arrows are first
//    erased when they lie only on paths starting at unoccupied vertices.
//  * replay_arrows: the Markov dynamics driven by the arrows in time order
//    (a T arrow lets type 1 colonise a vacant head; any arrow lets type 2
//    take a non-type-2 head). This is exactly the escape chain restricted to
//    the region.
//
// The two agree on B(t). They can disagree on A(t) when a T-arrow path
// passes through a vertex after type 2 has taken it; cross_validate
// measures how often.

#include <cstdint>
#include <vector>

#include "escape_lab/analytic.hpp"
#include "escape_lab/escape.hpp"
#include "escape_lab/tree.hpp"

namespace escape_lab {

struct Arrow {
  double time = 0.0;
  std::uint32_t from = 0;  ///< region index
  std::uint32_t to = 0;
  bool type1 = false;  ///< T arrow (rate 1); otherwise U arrow (rate lambda - 1)
};

class PercolationStructure {
 public:
  /// Throws ResourceError when the region holds more than max_vertices vertices.
  static PercolationStructure sample(const ModelParams& params, double horizon, std::size_t region_level,
                                     std::uint64_t seed, std::uint64_t max_vertices = 1u << 20);

  const ModelParams& params() const noexcept { return params_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t region_level() const noexcept { return region_level_; }
  std::size_t size() const noexcept { return vertices_.size(); }

  /// Arrows sorted by time.
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }

  const VertexId& vertex(std::uint32_t index) const { return vertices_.at(index); }
  /// Throws AddressError when v lies outside the region.
  std::uint32_t index_of(const VertexId& v) const;
  std::size_t level_of(std::uint32_t index) const noexcept { return vertices_[index].level(); }

 private:
  PercolationStructure(ModelParams params, double horizon, std::size_t region_level)
      : params_(params), horizon_(horizon), region_level_(region_level) {}

  ModelParams params_;
  double horizon_;
  std::size_t region_level_;
  std::vector<VertexId> vertices_;          // level order, lexicographic inside a level
  std::vector<std::uint64_t> level_offset_;  // index of the first vertex of each level
  std::vector<Arrow> arrows_;
};

struct GraphicalSets {
  std::vector<VertexId> type1;  ///< sorted
  std::vector<VertexId> type2;  ///< sorted
  /// A reached vertex sits on the region boundary, so arrows leaving the
  /// region could have mattered.
  bool truncated = false;
};

/// Path-definition sets at time t <= horizon.
GraphicalSets graphical_build(const InitialConfig& cfg, const PercolationStructure& perc, double t);

/// Convenience overload sampling the structure with `seed` and evaluating at the horizon.
GraphicalSets graphical_build(const InitialConfig& cfg, const ModelParams& params, double horizon_t,
                              std::size_t region_level, std::uint64_t seed);

/// Markov dynamics driven by the same arrows, evaluated at time t <= horizon.
GraphicalSets replay_arrows(const InitialConfig& cfg, const PercolationStructure& perc, double t);

/// Vertices reachable by time t from `sources` along arrows (T arrows only when type1_only).
std::vector<VertexId> arrow_reachable(const std::vector<VertexId>& sources, const PercolationStructure& perc,
                                      double t, bool type1_only);

struct CrossValidation {
  std::uint64_t instances = 0;
  std::uint64_t type1_agree = 0;
  std::uint64_t type2_agree = 0;
  std::uint64_t truncated = 0;
  double type1_agreement_rate() const noexcept {
    return instances ? static_cast<double>(type1_agree) / static_cast<double>(instances) : 0.0;
  }
};

/// Random small instances (region level <= max_region_level, horizon <= max_horizon,
/// random A(0)/B(0) near the root) compared between graphical_build and replay_arrows.
CrossValidation cross_validate(const ModelParams& params, std::uint64_t instances, std::size_t max_region_level,
                               double max_horizon, std::uint64_t seed);

}  // namespace escape_lab
