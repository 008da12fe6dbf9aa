#include <gtest/gtest.h>

#include <cmath>

#include "escape_lab/analytic.hpp"
#include "escape_lab/errors.hpp"
#include "escape_lab/richardson.hpp"
#include "escape_lab/stats.hpp"

using namespace escape_lab;

TEST(LazyField, ReproducibleAndSeedSensitive) {
  const TreeParams p{2};
  const LazyField a(p, 1.0, 42);
  const LazyField b(p, 1.0, 42);
  const LazyField c(p, 1.0, 43);
  const auto v = VertexId::parse("1.0.1.1");
  EXPECT_EQ(a.passage_time(v), b.passage_time(v));
  EXPECT_NE(a.passage_time(v), c.passage_time(v));
  EXPECT_EQ(a.passage_time(VertexId::root()), 0.0);
}

TEST(LazyField, RateScalesTimes) {
  const TreeParams p{3};
  const LazyField slow(p, 1.0, 9);
  const LazyField fast(p, 4.0, 9);
  for (const char* addr : {"0", "3.1", "2.2.0.1"}) {
    const auto v = VertexId::parse(addr);
    EXPECT_NEAR(fast.passage_time(v), slow.passage_time(v) / 4.0, 1e-12);
  }
}

TEST(PassageTimeField, MatchesLazyFieldAndIncreasesAlongPaths) {
  const TreeParams p{2};
  const auto field = PassageTimeField::sample(p, 1.0, 8, 5);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto times = field.level_times(n);
    ASSERT_EQ(times.size(), sphere_size(n, p));
    for (std::uint64_t i = 0; i < times.size(); ++i) {
      const auto v = vertex_at(n, i, p);
      ASSERT_DOUBLE_EQ(times[i], field.source().passage_time(v));
      ASSERT_GT(times[i], field.time(v.parent()));
    }
  }
}

TEST(PassageTimeField, CountsPartitionSphereAndGrow) {
  const TreeParams p{2};
  const auto field = PassageTimeField::sample(p, 1.0, 10, 77);
  for (std::size_t n = 0; n <= 10; ++n) {
    std::uint64_t prev = 0;
    for (double t = 0.0; t <= 20.0; t += 0.5) {
      const auto c = field.count_occupied(n, t);
      ASSERT_EQ(c.occupied + c.vacant, sphere_size(n, p));
      ASSERT_GE(c.occupied, prev);
      prev = c.occupied;
    }
  }
}

TEST(PassageTimeField, Errors) {
  const TreeParams p{2};
  EXPECT_THROW(PassageTimeField::sample(p, 1.0, 0, 1), DomainError);
  EXPECT_THROW(PassageTimeField::sample(p, 0.0, 4, 1), DomainError);
  EXPECT_THROW(PassageTimeField::sample(p, 1.0, 30, 1, FieldOptions{1000}), ResourceError);
  const auto field = PassageTimeField::sample(p, 1.0, 4, 1);
  EXPECT_THROW(field.time(VertexId::parse("0.0.0.0.0")), HorizonError);
  EXPECT_THROW(field.count_occupied(5, 1.0), HorizonError);
  EXPECT_THROW(field.shape_check(2.0, 0.2, 5.0), HorizonError);
}

TEST(PassageTimeField, MeanCountsMatchExpectation) {
  const TreeParams p{2};
  RunningStats occ;
  RunningStats vac;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const auto field = PassageTimeField::sample(p, 1.0, 10, 1000 + s);
    occ.add(static_cast<double>(field.count_occupied(10, 10 / 1.5).occupied));
    vac.add(static_cast<double>(field.count_occupied(10, 10 / 0.8).vacant));
  }
  const auto so = occ.summary();
  const auto sv = vac.summary();
  EXPECT_LT(std::abs(z_score(so.mean, expected_occupied(10, 1.5, p), so.stderr_mean())), 4.0);
  EXPECT_LT(std::abs(z_score(sv.mean, expected_vacant(10, 0.8, p), sv.stderr_mean())), 4.0);
}

TEST(PassageTimeField, ShapeCheckUsuallyHolds) {
  const TreeParams p{2};
  const auto speeds = richardson_speeds(2);
  int upper = 0;
  int lower = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto field = PassageTimeField::sample(p, 1.0, 16, s);
    const auto chk = field.shape_check(3.0, 0.5 * speeds.a, 5.0);
    upper += chk.upper_ok;
    lower += chk.lower_ok;
  }
  EXPECT_GE(upper, 54);
  EXPECT_EQ(lower, 60);  // inner disk is the root alone at this t
}

TEST(PassageTimeField, OffspringThresholdLimits) {
  const TreeParams p{2};
  const auto field = PassageTimeField::sample(p, 1.0, 7, 3);
  const auto x = VertexId::parse("0");
  EXPECT_EQ(field.gw_offspring(x, 6, 1e9), 64u);
  EXPECT_EQ(field.gw_offspring(x, 6, 0.0), 0u);
  EXPECT_EQ(field.gw_offspring(VertexId::root(), 3, 1e9), 12u);
  EXPECT_THROW(field.gw_offspring(x, 0, 1.0), DomainError);
  EXPECT_THROW(field.gw_offspring(x, 7, 1.0), HorizonError);
  std::uint64_t prev = 0;
  for (double th = 0.0; th < 5.0; th += 0.1) {
    const auto z = field.gw_offspring(x, 6, th);
    ASSERT_GE(z, prev);
    prev = z;
  }
}

TEST(ReachedSet, WalkVisitsExactlyTheMaterialisedSet) {
  const TreeParams p{2};
  const auto field = PassageTimeField::sample(p, 1.0, 14, 21);
  const double t = 2.5;
  std::vector<std::uint64_t> per_level(15, 0);
  for_each_reached(field.source(), t, [&](std::size_t level, double time) {
    ASSERT_LE(time, t);
    ASSERT_LT(level, per_level.size());
    ++per_level[level];
  });
  for (std::size_t n = 0; n < per_level.size(); ++n) {
    EXPECT_EQ(per_level[n], field.count_occupied(n, t).occupied) << n;
  }
}

TEST(ReachedSet, ContainmentProperties) {
  const TreeParams p{2};
  const LazyField f(p, 1.0, 5);
  // Same weights at a higher rate: pointwise earlier, so always contained.
  const LazyField faster(p, 3.0, 5);
  for (double t : {0.0, 1.0, 3.0, 6.0}) {
    EXPECT_TRUE(reached_set_contained(f, faster, t));
    EXPECT_TRUE(reached_set_contained(f, f, t));
  }
  EXPECT_FALSE(reached_set_contained(faster, f, 6.0));
  EXPECT_THROW(reached_set_contained(f, faster, 60.0, TraversalLimits{8, 1u << 20}), ResourceError);
}
