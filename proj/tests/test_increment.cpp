#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rado/increment.hpp"

using namespace rado;

namespace {

IntervalColouring whole_interval(std::int64_t n) {
  std::vector<std::vector<std::int64_t>> c(1);
  for (std::int64_t z = -n; z <= n; ++z) c[0].push_back(z);
  return IntervalColouring::from_classes(n, true, c);
}

IntervalColouring sign_colouring(std::int64_t n) {
  std::vector<std::vector<std::int64_t>> c(3);
  for (std::int64_t z = 1; z <= n; ++z) {
    c[0].push_back(z);
    c[1].push_back(-z);
  }
  c[2].push_back(0);
  return IntervalColouring::from_classes(n, true, c);
}

std::vector<int> affine_colouring(const FiniteGroup& g) {
  std::vector<int> c(g.order());
  for (std::size_t x = 0; x < c.size(); ++x) c[x] = static_cast<int>((g.digits(x)[0] + 2) % 3);
  return c;
}

void expect_monotone(const TraceRecord& t) {
  for (std::size_t i = 1; i < t.steps.size(); ++i)
    for (std::size_t j = 0; j < t.steps[i].s_row.size(); ++j) {
      EXPECT_GE(t.steps[i].s_row[j], t.steps[i - 1].s_row[j] - 1e-9);
      EXPECT_LE(t.steps[i].s_row[j], 1 + 1e-9);
    }
}

}  // namespace

TEST(EmbedInterval, SpecExamples) {
  auto e = embed_interval(10, 1, 1);
  EXPECT_EQ(e.group.modulus(), 31);
  e = embed_interval(1, 1, 1);
  EXPECT_EQ(e.group.modulus(), 5);
  EXPECT_EQ(e.b0.members().members(), (std::vector<std::size_t>{0, 1, 4}));
  e = embed_interval(10, 2, 3);
  EXPECT_EQ(e.group.modulus(), 71);
  EXPECT_EQ(e.b0.size(), 21u);
}

TEST(EmbedInterval, LeastPrimeAndExactInterval) {
  for (std::int64_t n : {1, 2, 7, 50}) {
    for (auto [a, b] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {1, 2}, {-3, 1}, {2, -5}}) {
      const auto e = embed_interval(n, a, b);
      const std::int64_t base = (2 * std::llabs(a) + std::llabs(b)) * n;
      std::int64_t p = base + 1;
      while (!oracle::is_prime(p)) ++p;
      ASSERT_EQ(e.group.modulus(), p);
      for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t c = x > p / 2 ? x - p : x;
        EXPECT_EQ(e.b0.contains(static_cast<std::size_t>(x)), std::llabs(c) <= n) << x;
      }
    }
  }
}

TEST(EmbedInterval, RejectsDegenerateInput) {
  EXPECT_THROW(embed_interval(0, 1, 1), InputError);
  EXPECT_THROW(embed_interval(5, 0, 1), InputError);
  EXPECT_THROW(embed_interval(5, 1, 0), InputError);
}

TEST(Subspace, RefineAndBasis) {
  const auto g = FiniteGroup::vector_space(3, 4);
  Subspace v = Subspace::whole(g);
  EXPECT_EQ(v.codim(), 0u);
  EXPECT_EQ(v.basis().size(), 4u);
  const std::size_t e1 = g.from_digits({1, 0, 0, 0}), mixed = g.from_digits({1, 2, 0, 1});
  v = v.refine(e1).refine(mixed);
  EXPECT_EQ(v.codim(), 2u);
  EXPECT_EQ(v.size(), 9u);
  EXPECT_EQ(v.refine(g.scale(2, e1)).codim(), 2u);  // already vanishes on V
  const auto basis = v.basis();
  ASSERT_EQ(basis.size(), 2u);
  GroupSubset span(g);
  for (std::int64_t s = 0; s < 3; ++s)
    for (std::int64_t t = 0; t < 3; ++t) span.insert(g.add(g.scale(s, basis[0]), g.scale(t, basis[1])));
  EXPECT_EQ(span, v.members());
  EXPECT_THROW(Subspace::whole(FiniteGroup::cyclic(7)), InputError);
}

TEST(SpectralIncrement, WholeSubspaceHasNoIncrement) {
  const auto g = FiniteGroup::vector_space(3, 3);
  const auto v = Subspace::whole(g);
  EXPECT_FALSE(spectral_increment(v.members(), v, 3).has_value());
}

TEST(SpectralIncrement, HyperplaneIsFoundAtCodimOne) {
  const auto g = FiniteGroup::vector_space(3, 3);
  const auto v = Subspace::whole(g);
  GroupSubset h(g);
  for (std::size_t x = 0; x < g.order(); ++x)
    if ((g.digits(x)[0] + g.digits(x)[2]) % 3 == 0) h.insert(x);
  const auto inc = spectral_increment(h, v, 3);
  ASSERT_TRUE(inc.has_value());
  EXPECT_EQ(inc->v.codim(), 1u);
  EXPECT_DOUBLE_EQ(inc->density, 1.0);
  EXPECT_EQ(inc->v.members(), h);
}

TEST(SpectralIncrement, PlantedStructureInF35) {
  const auto g = FiniteGroup::vector_space(3, 5);
  std::mt19937_64 rng(5);
  std::bernoulli_distribution dense(0.7), sparse(0.15);
  GroupSubset a(g);
  for (std::size_t x = 0; x < g.order(); ++x)
    if (g.digits(x)[1] == 2 ? dense(rng) : sparse(rng)) a.insert(x);
  const double alpha = a.density();
  const auto inc = spectral_increment(a, Subspace::whole(g), 5);
  ASSERT_TRUE(inc.has_value());
  // Recount A on the returned coset from the digits of its members.
  std::size_t hits = 0, size = 0;
  for (std::size_t y = 0; y < g.order(); ++y) {
    bool in_v = true;
    for (auto u : inc->v.annihilator()) in_v = in_v && g.pairing(u, y) == 0;
    if (!in_v) continue;
    ++size;
    hits += a.contains(g.add(inc->coset, y));
  }
  EXPECT_EQ(size, inc->v.size());
  const double counted = static_cast<double>(hits) / static_cast<double>(size);
  EXPECT_DOUBLE_EQ(counted, inc->density);
  EXPECT_GE(counted, (1 + 1.0 / 32) * alpha);
}

TEST(ToyIterate, SingleClassIsCaseOne) {
  const auto g = FiniteGroup::vector_space(3, 3);
  const auto t = toy_iterate(g, std::vector<int>(g.order(), 0), 1, 1);
  ASSERT_TRUE(t.terminated());
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].kase, "1");
  EXPECT_EQ(t.outcome.count, 729u);
  EXPECT_EQ(t.outcome.oracle_count, 729u);
}

TEST(ToyIterate, RandomColouringCountIsExact) {
  const auto g = FiniteGroup::vector_space(3, 4);
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const auto colour = random_colouring(g, 2, seed);
    const auto t = toy_iterate(g, colour, 1, 2);
    ASSERT_TRUE(t.terminated());
    expect_monotone(t);
    std::vector<std::size_t> cls;
    for (std::size_t x = 0; x < g.order(); ++x)
      if (colour[x] == static_cast<int>(t.outcome.j)) cls.push_back(x);
    EXPECT_EQ(t.outcome.count, oracle::triple_loop(GroupSubset(g, cls), 1, 2));
  }
}

TEST(ToyIterate, AffineColouringForcesAnIncrement) {
  const auto g = FiniteGroup::vector_space(3, 4);
  const auto t = toy_iterate(g, affine_colouring(g), 1, 1);
  ASSERT_TRUE(t.terminated());
  ASSERT_GE(t.steps.size(), 2u);
  EXPECT_EQ(t.steps[0].kase, "2");
  EXPECT_EQ(t.steps.back().kase, "1");
  expect_monotone(t);
  const auto j = t.steps[0].j;
  EXPECT_GE(t.steps[1].s_row[j], (1 + 1.0 / 32) * t.steps[0].s_row[j]);
  EXPECT_EQ(t.steps[1].d, 1u);
}

TEST(ToyIterate, ExhaustedBudgetIsFlagged) {
  const auto g = FiniteGroup::vector_space(3, 4);
  ToyConfig cfg;
  cfg.book = ConstantBook{};
  cfg.book.set("c32", 10.0);  // no gain of factor 11 exists below 1
  const auto t = toy_iterate(g, affine_colouring(g), 1, 1, cfg);
  EXPECT_FALSE(t.terminated());
  EXPECT_EQ(t.outcome.kind, "increment_budget");
  EXPECT_TRUE(t.outcome.dump.contains("subspace"));
}

TEST(ToyIterate, RejectsBadInput) {
  const auto g = FiniteGroup::vector_space(3, 2);
  EXPECT_THROW(toy_iterate(g, std::vector<int>(9, 0), 0, 1), InputError);
  EXPECT_THROW(toy_iterate(g, std::vector<int>(8, 0), 1, 1), InputError);
  EXPECT_THROW(toy_iterate(FiniteGroup::cyclic(7), std::vector<int>(7, 0), 1, 1), InputError);
}

TEST(ZpIterate, SingleClassCountsIntervalSolutions) {
  const auto t = zp_iterate(whole_interval(20), 1, 1);
  ASSERT_TRUE(t.terminated());
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].kase, "cd1");
  std::vector<std::int64_t> all;
  for (std::int64_t z = -20; z <= 20; ++z) all.push_back(z);
  EXPECT_EQ(t.outcome.count, oracle::integer_count(all, 1, 1));
  EXPECT_EQ(t.outcome.count, 1261u);
  EXPECT_EQ(t.outcome.oracle_count, t.outcome.count);
}

TEST(ZpIterate, SignColouringTerminatesNested) {
  const auto t = zp_iterate(sign_colouring(50), 1, 2);
  ASSERT_TRUE(t.terminated());
  expect_monotone(t);
  const auto p = t.setup["p"].get<std::int64_t>();
  EXPECT_EQ(p, 211);
  const auto g = FiniteGroup::cyclic(p);
  std::optional<GroupSubset> prev;
  for (const auto& s : t.steps) {
    const BohrSet bs(g, s.state["frequencies"].get<std::vector<std::int64_t>>(), *s.delta);
    EXPECT_EQ(bs.size(), s.state["bohr_size"].get<std::size_t>());
    if (prev) {
      EXPECT_TRUE(bs.members().subset_of(*prev));
    }
    prev = bs.members();
  }
  const auto classes = sign_colouring(50).classes();
  EXPECT_EQ(t.outcome.count, oracle::integer_count(classes[t.outcome.j], 1, 2));
}

TEST(ZpIterate, RandomTwoColouringsTerminate) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::vector<std::int64_t>> c(2);
    for (std::int64_t z = -50; z <= 50; ++z) c[rng() % 2].push_back(z);
    const auto col = IntervalColouring::from_classes(50, true, c);
    const auto t = zp_iterate(col, 1, 1);
    ASSERT_TRUE(t.terminated()) << t.outcome.reason;
    EXPECT_EQ(t.outcome.count, oracle::integer_count(col.classes()[t.outcome.j], 1, 1));
  }
}

TEST(ZpIterate, ZeroGridIsAChainBudgetFlag) {
  ZpConfig cfg;
  cfg.grid = 0;
  const auto t = zp_iterate(whole_interval(20), 1, 1, cfg);
  EXPECT_FALSE(t.terminated());
  EXPECT_EQ(t.outcome.kind, "chain_budget");
  EXPECT_TRUE(t.outcome.dump.contains("frequencies"));
}

TEST(ZpIterate, UnsignedColouringRejected) {
  const auto c = IntervalColouring::from_classes(3, false, {{1, 2, 3}});
  EXPECT_THROW(zp_iterate(c, 1, 1), InputError);
}

TEST(TraceRecord, NdjsonAndCsvShape) {
  const auto g = FiniteGroup::vector_space(3, 4);
  const auto t = toy_iterate(g, affine_colouring(g), 1, 1);
  std::istringstream in(t.to_ndjson());
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), t.steps.size() + 2);
  EXPECT_EQ(lines.front()["type"], "setup");
  EXPECT_EQ(lines.back()["type"], "outcome");
  EXPECT_EQ(lines[1]["case"], "2");
  const auto csv = t.to_csv();
  EXPECT_EQ(csv.rfind("step,case,j,S,d,delta\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), t.steps.size() + 1);
}

TEST(TraceRecord, Deterministic) {
  const auto g = FiniteGroup::vector_space(3, 4);
  EXPECT_EQ(toy_iterate(g, random_colouring(g, 2, 9), 1, 1).to_ndjson(),
            toy_iterate(g, random_colouring(g, 2, 9), 1, 1).to_ndjson());
  EXPECT_EQ(zp_iterate(sign_colouring(20), 1, 1).to_ndjson(), zp_iterate(sign_colouring(20), 1, 1).to_ndjson());
}
