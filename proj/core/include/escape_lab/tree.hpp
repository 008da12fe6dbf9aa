#pragma once

// Geometry of the infinite homogeneous tree in which every vertex has d+1
// neighbours. Vertices are addressed by their path from the root; the tree
// itself is never materialised.
//
// Address ranges: the first index is in [0, d] (the root has d+1 forward
// branches), every later index is in [0, d-1].
//
// |C_n| = (d+1) d^(n-1) for n >= 1, i.e. (d+1)/d * d^n. Note this is not
// (d+1) d^n: the root contributes d+1 branches and every later level d.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace escape_lab {

class TreeParams {
 public:
  /// Throws DomainError for d < 2.
  explicit TreeParams(int d);

  int d() const noexcept { return d_; }
  /// Forward branches out of a vertex at `level`: d+1 at the root, d elsewhere.
  int branching(std::size_t level) const noexcept { return level == 0 ? d_ + 1 : d_; }

  friend bool operator==(const TreeParams&, const TreeParams&) = default;

 private:
  int d_;
};

class VertexId {
 public:
  VertexId() = default;  // root
  explicit VertexId(std::vector<std::uint32_t> path) : path_(std::move(path)) {}

  static VertexId root() { return VertexId{}; }

  /// Parses the dot-separated form ("" is the root, "0.1.1" a level-3 vertex).
  static VertexId parse(std::string_view text);

  std::size_t level() const noexcept { return path_.size(); }
  bool is_root() const noexcept { return path_.empty(); }
  std::span<const std::uint32_t> path() const noexcept { return path_; }

  VertexId child(std::uint32_t branch) const;
  /// Throws AddressError on the root.
  VertexId parent() const;
  /// Ancestor `levels_up` steps towards the root (0 returns *this).
  VertexId ancestor(std::size_t levels_up) const;

  std::string to_string() const;

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
  friend bool operator==(const VertexId&, const VertexId&) = default;

 private:
  std::vector<std::uint32_t> path_;
};

struct VertexIdHash {
  std::size_t operator()(const VertexId& v) const noexcept;
};

bool is_valid(const VertexId& v, const TreeParams& p) noexcept;
/// Throws AddressError naming the offending index.
void require_valid(const VertexId& v, const TreeParams& p);

/// Parent (when v is not the root) followed by the forward children. Always d+1 entries.
std::vector<VertexId> neighbors(const VertexId& v, const TreeParams& p);

std::size_t common_prefix_length(const VertexId& x, const VertexId& y) noexcept;

/// Graph distance |x, y|.
std::size_t distance(const VertexId& x, const VertexId& y) noexcept;

/// Ancestor at level(v) - m. Throws DomainError for m < 1 and AddressError when level(v) < m.
VertexId m_predecessor(const VertexId& v, std::size_t m);

/// Membership of y in T+(x): the root geodesic of y passes through x.
bool in_forward_subtree(const VertexId& x, const VertexId& y) noexcept;

/// Number of vertices at distance n from the root. Throws ResourceError on 64-bit overflow.
std::uint64_t sphere_size(std::size_t n, const TreeParams& p);
double log_sphere_size(std::size_t n, const TreeParams& p) noexcept;
/// Number of vertices at distance <= n from the root.
std::uint64_t disk_size(std::size_t n, const TreeParams& p);

/// Index of a vertex among the vertices of its level, in lexicographic path order.
std::uint64_t level_index(const VertexId& v, const TreeParams& p);
/// Inverse of level_index.
VertexId vertex_at(std::size_t level, std::uint64_t index, const TreeParams& p);

/// All vertices of C_n in lexicographic order. Intended for small n.
std::vector<VertexId> enumerate_sphere(std::size_t n, const TreeParams& p);

}  // namespace escape_lab
