#pragma once

// Richardson growth on the homogeneous tree via first-passage times.
//
// Started from the root, the infected set stays connected, so every vacant
// boundary vertex has exactly one infected neighbour: its parent. The
// infection time of a vertex is therefore the sum of independent Exp(rate)
// edge weights along its root path, and the whole process is encoded by
// the weights. Weights come from a counter-based generator keyed by
// (seed, path), so any vertex can be evaluated without storing its
// ancestors' siblings, and a rate-r field is the rate-1 field with every
// time divided by r.

#include <cstdint>
#include <span>
#include <vector>

#include "escape_lab/tree.hpp"

namespace escape_lab {

/// Stateless description of a weight field: (tree, rate, seed).
class LazyField {
 public:
  LazyField(TreeParams tree, double rate, std::uint64_t seed);

  const TreeParams& tree() const noexcept { return tree_; }
  double rate() const noexcept { return rate_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t root_key() const noexcept;
  static std::uint64_t child_key(std::uint64_t parent_key, std::uint32_t branch) noexcept;
  /// Exp(rate) weight of the edge into the vertex identified by `key`.
  double weight(std::uint64_t key) const noexcept;

  /// First-passage time T(v), computed along the root path.
  double passage_time(const VertexId& v) const;

 private:
  TreeParams tree_;
  double rate_;
  std::uint64_t seed_;
};

struct FieldOptions {
  /// Upper bound on materialised vertices (8 bytes each).
  std::uint64_t max_vertices = std::uint64_t{1} << 24;
};

struct LevelCount {
  std::uint64_t occupied = 0;  ///< N_n(t)
  std::uint64_t vacant = 0;    ///< F_n(t)
};

struct ShapeCheck {
  bool lower_ok = false;  ///< D_{t a'} is fully infected
  bool upper_ok = false;  ///< nothing beyond D_{t b'} is infected
};

/// Passage times materialised for every vertex up to level n_max, stored
/// level by level in lexicographic path order. Memory: 8 bytes times
/// sum_{k<=n_max} |C_k|, about 8 (d+1)/(d-1) d^n_max bytes; for d=2 and
/// n_max=20 that is ~25 MB.
class PassageTimeField {
 public:
  /// Throws DomainError for n_max < 1 or rate <= 0, ResourceError (with the
  /// required vertex count) when the disk exceeds opts.max_vertices.
  static PassageTimeField sample(const TreeParams& tree, double rate, std::size_t n_max,
                                 std::uint64_t seed, FieldOptions opts = {});

  const LazyField& source() const noexcept { return source_; }
  const TreeParams& tree() const noexcept { return source_.tree(); }
  double rate() const noexcept { return source_.rate(); }
  std::size_t n_max() const noexcept { return levels_.size() - 1; }

  /// Throws HorizonError beyond n_max.
  double time(const VertexId& v) const;
  std::span<const double> level_times(std::size_t n) const;

  /// N_n(t) and F_n(t) = |C_n| - N_n(t).
  LevelCount count_occupied(std::size_t n, double t) const;

  /// Disk containment D_{t a'} c R(t) c D_{t b'}. Requires t b' <= n_max;
  /// children of level n_max are evaluated lazily when needed.
  ShapeCheck shape_check(double t, double a_prime, double b_prime) const;

  /// Z_1(x): descendants z of x at level |x| + m with T(z) - T(x) < threshold * m.
  std::uint64_t gw_offspring(const VertexId& x, std::size_t m, double threshold) const;

 private:
  PassageTimeField(LazyField source, std::vector<std::vector<double>> levels,
                   std::vector<std::uint64_t> frontier_keys)
      : source_(source), levels_(std::move(levels)), frontier_keys_(std::move(frontier_keys)) {}

  void require_level(std::size_t n) const;

  LazyField source_;
  std::vector<std::vector<double>> levels_;
  std::vector<std::uint64_t> frontier_keys_;  // keys of level n_max, for lazy extension
};

struct TraversalLimits {
  std::size_t max_level = 256;
  std::uint64_t max_nodes = std::uint64_t{1} << 27;
};

/// Depth-first walk over R(t) = {v : T(v) <= t} without materialising it.
/// Visitor: void(std::size_t level, double time). Returns vertices visited.
/// Throws ResourceError when a reached vertex lies beyond limits.max_level or
/// the walk exceeds limits.max_nodes.
template <typename Visitor>
std::uint64_t for_each_reached(const LazyField& field, double t, Visitor&& visit,
                               TraversalLimits limits = {});

/// Whether R_inner(t) c R_outer(t) for two fields on the same tree, checked by a
/// joint walk over R_inner(t) that stops at the first vertex of R_inner(t)
/// missing from R_outer(t).
bool reached_set_contained(const LazyField& inner, const LazyField& outer, double t,
                           TraversalLimits limits = {});

}  // namespace escape_lab

#include "escape_lab/richardson_inl.hpp"
