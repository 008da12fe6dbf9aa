#include "escape_lab/tree.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "escape_lab/errors.hpp"

namespace escape_lab {

TreeParams::TreeParams(int d) : d_(d) {
  if (d < 2) {
    throw DomainError("tree degree parameter d must be >= 2, got " + std::to_string(d));
  }
}

VertexId VertexId::parse(std::string_view text) {
  std::vector<std::uint32_t> path;
  if (text.empty()) return VertexId{};
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const std::string_view token =
        text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw AddressError("malformed vertex address '" + std::string(text) + "'");
    }
    path.push_back(value);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return VertexId{std::move(path)};
}

VertexId VertexId::child(std::uint32_t branch) const {
  std::vector<std::uint32_t> p = path_;
  p.push_back(branch);
  return VertexId{std::move(p)};
}

VertexId VertexId::parent() const {
  if (path_.empty()) throw AddressError("the root has no parent");
  return VertexId{std::vector<std::uint32_t>(path_.begin(), path_.end() - 1)};
}

VertexId VertexId::ancestor(std::size_t levels_up) const {
  if (levels_up > path_.size()) {
    throw AddressError("vertex " + to_string() + " has no ancestor " +
                       std::to_string(levels_up) + " levels up");
  }
  return VertexId{std::vector<std::uint32_t>(path_.begin(),
                                             path_.end() - static_cast<std::ptrdiff_t>(levels_up))};
}

std::string VertexId::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path_[i]);
  }
  return out;
}

std::size_t VertexIdHash::operator()(const VertexId& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.level();
  for (std::uint32_t b : v.path()) {
    h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool is_valid(const VertexId& v, const TreeParams& p) noexcept {
  const auto path = v.path();
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= static_cast<std::uint32_t>(p.branching(i))) return false;
  }
  return true;
}

void require_valid(const VertexId& v, const TreeParams& p) {
  const auto path = v.path();
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= static_cast<std::uint32_t>(p.branching(i))) {
      throw AddressError("vertex '" + v.to_string() + "': branch index " + std::to_string(path[i]) +
                         " at position " + std::to_string(i) + " exceeds " +
                         std::to_string(p.branching(i) - 1) + " for d=" + std::to_string(p.d()));
    }
  }
}

std::vector<VertexId> neighbors(const VertexId& v, const TreeParams& p) {
  require_valid(v, p);
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(p.d()) + 1);
  if (!v.is_root()) out.push_back(v.parent());
  const int forward = p.branching(v.level());
  for (int b = 0; b < forward; ++b) out.push_back(v.child(static_cast<std::uint32_t>(b)));
  return out;
}

std::size_t common_prefix_length(const VertexId& x, const VertexId& y) noexcept {
  const auto a = x.path();
  const auto b = y.path();
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

std::size_t distance(const VertexId& x, const VertexId& y) noexcept {
  return x.level() + y.level() - 2 * common_prefix_length(x, y);
}

VertexId m_predecessor(const VertexId& v, std::size_t m) {
  if (m < 1) throw DomainError("m-predecessor stride must be >= 1");
  if (v.level() < m) {
    throw AddressError("vertex '" + v.to_string() + "' at level " + std::to_string(v.level()) +
                       " has no " + std::to_string(m) + "-predecessor");
  }
  return v.ancestor(m);
}

bool in_forward_subtree(const VertexId& x, const VertexId& y) noexcept {
  return x.level() <= y.level() && common_prefix_length(x, y) == x.level();
}

std::uint64_t sphere_size(std::size_t n, const TreeParams& p) {
  if (n == 0) return 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto d = static_cast<std::uint64_t>(p.d());
  std::uint64_t size = d + 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (size > kMax / d) {
      throw ResourceError("sphere size at level " + std::to_string(n) + " overflows 64 bits");
    }
    size *= d;
  }
  return size;
}

double log_sphere_size(std::size_t n, const TreeParams& p) noexcept {
  if (n == 0) return 0.0;
  return std::log(static_cast<double>(p.d()) + 1.0) +
         static_cast<double>(n - 1) * std::log(static_cast<double>(p.d()));
}

std::uint64_t disk_size(std::size_t n, const TreeParams& p) {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const std::uint64_t s = sphere_size(k, p);
    if (total > std::numeric_limits<std::uint64_t>::max() - s) {
      throw ResourceError("disk size at radius " + std::to_string(n) + " overflows 64 bits");
    }
    total += s;
  }
  return total;
}

std::uint64_t level_index(const VertexId& v, const TreeParams& p) {
  require_valid(v, p);
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < v.level(); ++i) {
    index = index * static_cast<std::uint64_t>(p.branching(i)) + v.path()[i];
  }
  return index;
}

VertexId vertex_at(std::size_t level, std::uint64_t index, const TreeParams& p) {
  if (index >= sphere_size(level, p)) {
    throw AddressError("index " + std::to_string(index) + " out of range for level " +
                       std::to_string(level));
  }
  std::vector<std::uint32_t> path(level);
  const auto d = static_cast<std::uint64_t>(p.d());
  for (std::size_t i = level; i-- > 1;) {
    path[i] = static_cast<std::uint32_t>(index % d);
    index /= d;
  }
  if (level > 0) path[0] = static_cast<std::uint32_t>(index);
  return VertexId{std::move(path)};
}

std::vector<VertexId> enumerate_sphere(std::size_t n, const TreeParams& p) {
  std::vector<VertexId> level{VertexId::root()};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<VertexId> next;
    next.reserve(level.size() * static_cast<std::size_t>(p.branching(k)));
    for (const auto& v : level) {
      for (int b = 0; b < p.branching(k); ++b) next.push_back(v.child(static_cast<std::uint32_t>(b)));
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace escape_lab
