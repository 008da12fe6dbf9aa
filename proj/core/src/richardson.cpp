#include "escape_lab/richardson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "escape_lab/errors.hpp"
#include "escape_lab/rng.hpp"

namespace escape_lab {

LazyField::LazyField(TreeParams tree, double rate, std::uint64_t seed)
    : tree_(tree), rate_(rate), seed_(seed) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("Richardson rate must be finite and > 0, got " + std::to_string(rate));
  }
}

std::uint64_t LazyField::root_key() const noexcept { return derive_seed(seed_, {0x7269636800ULL}); }

std::uint64_t LazyField::child_key(std::uint64_t parent_key, std::uint32_t branch) noexcept {
  return splitmix64(parent_key ^ ((static_cast<std::uint64_t>(branch) + 1) * 0xd6e8feb86659fd93ULL));
}

double LazyField::weight(std::uint64_t key) const noexcept {
  return exponential_from_bits(splitmix64(key ^ 0xa0761d6478bd642fULL), rate_);
}

double LazyField::passage_time(const VertexId& v) const {
  require_valid(v, tree_);
  std::uint64_t key = root_key();
  double t = 0.0;
  for (std::uint32_t b : v.path()) {
    key = child_key(key, b);
    t += weight(key);
  }
  return t;
}

PassageTimeField PassageTimeField::sample(const TreeParams& tree, double rate, std::size_t n_max,
                                          std::uint64_t seed, FieldOptions opts) {
  if (n_max < 1) throw DomainError("field horizon n_max must be >= 1");
  LazyField source{tree, rate, seed};

  std::uint64_t required = 0;
  try {
    required = disk_size(n_max, tree);
  } catch (const ResourceError&) {
    throw ResourceError("field to level " + std::to_string(n_max) + " needs more than 2^64 vertices");
  }
  if (required > opts.max_vertices) {
    throw ResourceError("field to level " + std::to_string(n_max) + " with d=" +
                        std::to_string(tree.d()) + " needs " + std::to_string(required) +
                        " vertices (" + std::to_string(required * sizeof(double)) +
                        " bytes); budget is " + std::to_string(opts.max_vertices) + " vertices");
  }

  std::vector<std::vector<double>> levels(n_max + 1);
  levels[0] = {0.0};
  std::vector<std::uint64_t> keys{source.root_key()};
  for (std::size_t k = 0; k < n_max; ++k) {
    const auto branches = static_cast<std::uint32_t>(tree.branching(k));
    const auto& parent_times = levels[k];
    std::vector<double> times;
    std::vector<std::uint64_t> child_keys;
    times.reserve(parent_times.size() * branches);
    child_keys.reserve(parent_times.size() * branches);
    for (std::size_t j = 0; j < parent_times.size(); ++j) {
      for (std::uint32_t b = 0; b < branches; ++b) {
        const std::uint64_t key = LazyField::child_key(keys[j], b);
        child_keys.push_back(key);
        times.push_back(parent_times[j] + source.weight(key));
      }
    }
    levels[k + 1] = std::move(times);
    keys = std::move(child_keys);
  }
  return PassageTimeField{source, std::move(levels), std::move(keys)};
}

void PassageTimeField::require_level(std::size_t n) const {
  if (n > n_max()) {
    throw HorizonError("level " + std::to_string(n) + " is beyond the field horizon " +
                       std::to_string(n_max()));
  }
}

double PassageTimeField::time(const VertexId& v) const {
  require_level(v.level());
  return levels_[v.level()][level_index(v, tree())];
}

std::span<const double> PassageTimeField::level_times(std::size_t n) const {
  require_level(n);
  return levels_[n];
}

LevelCount PassageTimeField::count_occupied(std::size_t n, double t) const {
  require_level(n);
  const auto& times = levels_[n];
  LevelCount out;
  out.occupied = static_cast<std::uint64_t>(
      std::count_if(times.begin(), times.end(), [t](double x) { return x <= t; }));
  out.vacant = times.size() - out.occupied;
  return out;
}

ShapeCheck PassageTimeField::shape_check(double t, double a_prime, double b_prime) const {
  if (!(t >= 0.0)) throw DomainError("shape check time must be >= 0");
  if (t * b_prime > static_cast<double>(n_max())) {
    throw HorizonError("shape check needs levels up to t*b' = " + std::to_string(t * b_prime) +
                       " but the field horizon is " + std::to_string(n_max()));
  }
  ShapeCheck out{true, true};

  const double inner = std::floor(t * a_prime);
  if (inner >= 0.0) {
    const auto inner_level = static_cast<std::size_t>(inner);
    for (std::size_t k = 0; k <= std::min(inner_level, n_max()) && out.lower_ok; ++k) {
      out.lower_ok = std::all_of(levels_[k].begin(), levels_[k].end(), [t](double x) { return x <= t; });
    }
  }

  // Passage times increase along root paths, so it suffices to inspect the
  // first level strictly beyond t*b'.
  const auto outer_level = static_cast<std::size_t>(std::floor(t * b_prime)) + 1;
  if (outer_level <= n_max()) {
    out.upper_ok = std::none_of(levels_[outer_level].begin(), levels_[outer_level].end(),
                                [t](double x) { return x <= t; });
  } else {
    const auto& last = levels_[n_max()];
    const auto branches = static_cast<std::uint32_t>(tree().branching(n_max()));
    for (std::size_t j = 0; j < last.size() && out.upper_ok; ++j) {
      if (last[j] > t) continue;
      for (std::uint32_t b = 0; b < branches; ++b) {
        if (last[j] + source_.weight(LazyField::child_key(frontier_keys_[j], b)) <= t) {
          out.upper_ok = false;
          break;
        }
      }
    }
  }
  return out;
}

std::uint64_t PassageTimeField::gw_offspring(const VertexId& x, std::size_t m, double threshold) const {
  if (m < 1) throw DomainError("offspring stride m must be >= 1");
  require_level(x.level() + m);
  const double origin = time(x);
  const double limit = threshold * static_cast<double>(m);

  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  if (x.is_root()) {
    end = sphere_size(m, tree());
  } else {
    std::uint64_t span = 1;
    for (std::size_t i = 0; i < m; ++i) span *= static_cast<std::uint64_t>(tree().d());
    begin = level_index(x, tree()) * span;
    end = begin + span;
  }
  const auto& times = levels_[x.level() + m];
  std::uint64_t count = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    if (times[i] - origin < limit) ++count;
  }
  return count;
}

bool reached_set_contained(const LazyField& inner, const LazyField& outer, double t,
                           TraversalLimits limits) {
  if (!(inner.tree() == outer.tree())) throw DomainError("fields live on different trees");
  struct Frame {
    std::uint64_t inner_key;
    std::uint64_t outer_key;
    std::size_t level;
    double inner_time;
    double outer_time;
  };
  if (!(t >= 0.0)) return true;
  std::vector<Frame> stack{{inner.root_key(), outer.root_key(), 0, 0.0, 0.0}};
  std::uint64_t visited = 0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.outer_time > t) return false;
    if (f.level > limits.max_level) {
      throw ResourceError("reached set at time " + std::to_string(t) + " extends past level " +
                          std::to_string(limits.max_level));
    }
    if (++visited > limits.max_nodes) {
      throw ResourceError("reached set at time " + std::to_string(t) + " exceeds " +
                          std::to_string(limits.max_nodes) + " vertices");
    }
    const auto branches = static_cast<std::uint32_t>(inner.tree().branching(f.level));
    for (std::uint32_t b = 0; b < branches; ++b) {
      const std::uint64_t ik = LazyField::child_key(f.inner_key, b);
      const double it = f.inner_time + inner.weight(ik);
      if (it > t) continue;
      const std::uint64_t ok = LazyField::child_key(f.outer_key, b);
      stack.push_back({ik, ok, f.level + 1, it, f.outer_time + outer.weight(ok)});
    }
  }
  return true;
}

}  // namespace escape_lab
