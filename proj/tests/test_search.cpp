#include <gtest/gtest.h>

#include <random>

#include "rado/search.hpp"

using namespace rado;

namespace {

// Does every r-colouring of [n] (all r^n of them, no symmetry breaking) contain
// a monochromatic solution? Checked by direct triple-free test per colouring.
bool every_colouring_forced(const CoefficientVector& a, int r, std::int64_t n) {
  if (n == 0) return false;
  std::vector<int> col(static_cast<std::size_t>(n), 0);
  while (true) {
    IntervalColouring c(n, false, r);
    for (std::int64_t x = 1; x <= n; ++x) c.set(x, col[static_cast<std::size_t>(x - 1)]);
    // Independent check: brute-force all tuples in [n]^d.
    const std::size_t d = a.dim();
    std::vector<std::int64_t> x(d, 1);
    bool mono = false;
    while (!mono) {
      if (a.dot(x) == 0) {
        bool same = true;
        for (std::size_t i = 1; i < d; ++i) same &= c.colour(x[i]) == c.colour(x[0]);
        mono = same;
      }
      std::size_t k = 0;
      while (k < d && x[k] == n) x[k++] = 1;
      if (k == d) break;
      ++x[k];
    }
    if (!mono) return false;
    std::size_t k = 0;
    while (k < col.size() && col[k] == r - 1) col[k++] = 0;
    if (k == col.size()) return true;
    ++col[k];
  }
}

std::int64_t brute_force_rado(const CoefficientVector& a, int r, std::int64_t n_max) {
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (every_colouring_forced(a, r, n)) return n;
  return -1;
}

}  // namespace

TEST(MonoSolution, Examples) {
  auto a = CoefficientVector::parse("1,1,-1");
  auto one = IntervalColouring::from_classes(2, false, {{1, 2}});
  auto s = find_mono_solution(one, a);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->colour, 0);
  EXPECT_EQ(s->x, (std::vector<std::int64_t>{1, 1, 2}));

  EXPECT_FALSE(find_mono_solution(IntervalColouring::from_classes(4, false, {{1, 4}, {2, 3}}), a));
  EXPECT_FALSE(find_mono_solution(IntervalColouring::from_classes(5, false, {{1, 4}, {2, 3}, {5}}), a));
}

TEST(MonoSolution, DistinctMode) {
  auto a = CoefficientVector::parse("1,1,-1");
  // {1,2} has 1+1=2 but no solution with distinct entries.
  auto c = IntervalColouring::from_classes(2, false, {{1, 2}});
  EXPECT_TRUE(find_mono_solution(c, a));
  EXPECT_FALSE(find_mono_solution(c, a, true));
  auto c3 = IntervalColouring::from_classes(3, false, {{1, 2, 3}});
  auto s = find_mono_solution(c3, a, true);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->x, (std::vector<std::int64_t>{1, 2, 3}));
}

TEST(RadoNumber, SchurExamples) {
  auto a = CoefficientVector::parse("1,1,-1");
  auto r1 = rado_number(a, 1, 10);
  EXPECT_EQ(r1.value, 2);
  auto r2 = rado_number(a, 2, 10);
  ASSERT_EQ(r2.value, 5);
  ASSERT_TRUE(r2.certificate);
  EXPECT_EQ(r2.certificate->classes(), (std::vector<std::vector<std::int64_t>>{{1, 4}, {2, 3}}));
  auto r3 = rado_number(a, 3, 20);
  EXPECT_EQ(r3.value, 14);
  EXPECT_FALSE(find_mono_solution(*r3.certificate, a));
  EXPECT_EQ(r3.certificate->n(), 13);
}

TEST(RadoNumber, NotRegularIsAnInputError) {
  EXPECT_THROW(rado_number(CoefficientVector::parse("1,1,-3"), 2, 10), InputError);
  EXPECT_THROW(rado_number(CoefficientVector::parse("1,1,-1"), 0, 10), InputError);
}

TEST(RadoNumber, InconclusiveReturnsCertificateOfBudget) {
  auto a = CoefficientVector::parse("1,1,-1");
  auto r = rado_number(a, 3, 9);
  EXPECT_FALSE(r.value);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->n(), 9);
  EXPECT_FALSE(find_mono_solution(*r.certificate, a));
}

TEST(RadoNumber, InvariantEquationsAreOne) {
  for (auto s : {"1,-1", "2,3,-5", "1,1,1,-3", "4,-4"})
    for (int r = 1; r <= 4; ++r) EXPECT_EQ(rado_number(CoefficientVector::parse(s), r, 10).value, 1) << s;
}

TEST(RadoNumber, MatchesFlatEnumerationOracle) {
  for (auto s : {"1,1,-1", "1,-2,1", "2,-1,-1", "1,2,-3", "3,-1,-2", "1,1,1,-3", "2,2,-1", "1,-1,2,-1"}) {
    auto a = CoefficientVector::parse(s);
    if (!is_partition_regular(a)) continue;
    for (int r = 1; r <= 2; ++r) {
      const std::int64_t oracle = brute_force_rado(a, r, 8);
      auto got = rado_number(a, r, 8);
      if (oracle < 0) {
        EXPECT_FALSE(got.value) << s << " r=" << r;
      } else {
        EXPECT_EQ(got.value, oracle) << s << " r=" << r;
      }
      if (got.certificate) {
        EXPECT_FALSE(find_mono_solution(*got.certificate, a)) << s;
      }
    }
  }
}

TEST(RadoNumber, MonotoneInColours) {
  for (auto s : {"1,1,-1", "1,2,-3", "2,-1,-1"}) {
    auto a = CoefficientVector::parse(s);
    std::int64_t prev = 0;
    for (int r = 1; r <= 3; ++r) {
      auto res = rado_number(a, r, 40);
      if (!res.value) break;
      EXPECT_GE(*res.value, prev) << s;
      prev = *res.value;
    }
  }
}

TEST(RadoNumber, ThreadedSearchIsDeterministic) {
  auto a = CoefficientVector::parse("1,1,-1");
  auto single = rado_number(a, 3, 20, 1);
  for (unsigned t : {2u, 4u}) {
    auto multi = rado_number(a, 3, 20, t);
    EXPECT_EQ(multi.value, single.value);
    EXPECT_EQ(multi.certificate, single.certificate);
    EXPECT_EQ(multi.nodes_explored, single.nodes_explored);
  }
}

TEST(WitnessColouring, Examples) {
  auto a = CoefficientVector::parse("1,1,-1");
  auto w = witness_colouring(a, 2, 4);
  ASSERT_TRUE(w);
  EXPECT_FALSE(find_mono_solution(*w, a));
  EXPECT_FALSE(witness_colouring(a, 2, 5));
  auto one = witness_colouring(a, 1, 1);
  ASSERT_TRUE(one);
  EXPECT_EQ(one->classes(), (std::vector<std::vector<std::int64_t>>{{1}}));
}

TEST(CountInterval, Examples) {
  std::vector<std::int64_t> zero{0}, none{}, three{-1, 0, 1};
  EXPECT_EQ(count_solutions_interval(zero, 1, 1), 1u);
  EXPECT_EQ(count_solutions_interval(none, 1, 1), 0u);
  EXPECT_EQ(count_solutions_interval(three, 1, 1), 7u);
  EXPECT_THROW(count_solutions_interval(three, 0, 1), InputError);
}

TEST(CountInterval, MatchesTripleLoop) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const std::int64_t n = 1 + rng() % 15;
    std::vector<std::int64_t> set;
    for (std::int64_t x = -n; x <= n; ++x)
      if (rng() % 2) set.push_back(x);
    const std::int64_t a = 1 + rng() % 3, b = static_cast<std::int64_t>(rng() % 5) - 2;
    if (b == 0) continue;
    std::uint64_t want = 0;
    for (auto x : set)
      for (auto y : set)
        for (auto z : set) want += (a * x - a * y == b * z);
    EXPECT_EQ(count_solutions_interval(set, a, b), want);
  }
}
