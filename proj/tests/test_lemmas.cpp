#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rado/lemmas/instances.hpp"
#include "rado/lemmas/itstep.hpp"

using namespace rado;

namespace {

const FiniteGroup kZ401 = FiniteGroup::cyclic(401);

// Exhaustive sigma in {-1,0,1}^n.
bool dissociated_oracle(std::int64_t p, const std::vector<std::size_t>& lam) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < lam.size(); ++i) total *= 3;
  for (std::size_t code = 1; code < total; ++code) {
    std::int64_t s = 0;
    std::size_t c = code;
    for (auto l : lam) {
      s += (static_cast<std::int64_t>(c % 3) - 1) * static_cast<std::int64_t>(l);
      c /= 3;
    }
    if (((s % p) + p) % p == 0) {
      c = code;
      bool nonzero = false;
      for (std::size_t i = 0; i < lam.size(); ++i, c /= 3) nonzero |= c % 3 != 1;
      if (nonzero) return false;
    }
  }
  return true;
}

std::size_t count_pairs_in(const GroupSubset& d, const GroupSubset& t, const GroupSubset& s) {
  const auto p = d.group().order();
  std::size_t c = 0;
  for (auto x : t.members())
    for (auto y : s.members()) c += d.contains((x + y) % p);
  return c;
}

ConstantBook relaxed_itstep_book() {
  ConstantBook b;
  b.set("rdc", 0.2);
  b.set("itstep_sift_kappa", 0.9);
  b.set("sift_batch", 8192);
  return b;
}

}  // namespace

// ---- spectral positivity ----

TEST(Specpos, WholeGroupHasNoDeviation) {
  const auto g = FiniteGroup::cyclic(101);
  const auto all = GroupSubset::whole(g);
  EXPECT_THROW(verify_specpos(all, all, all, DensityWeight::uniform_on(all), all, 2, 0.5, 0.5), HypothesisFail);
}

TEST(Specpos, RandomInstancesPassWithDirectNorm) {
  std::mt19937_64 rng(101);
  int done = 0;
  for (int i = 0; i < 80 && done < 30; ++i) {
    auto in = draw_specpos_instance(kZ401, rng);
    if (!in) continue;
    ++done;
    const auto v = verify_specpos(in->a, in->b0, in->b1, in->mu, in->d, in->k, in->epsilon, in->eta);
    EXPECT_TRUE(v.pass) << v.to_json().dump();
    EXPECT_GE(v.details.at("fhat_min").get<double>(), -1e-9);
    const auto f = oracle::autocorrelation(in->a.intersect(in->b0));
    double s = 0;
    for (std::size_t u = 0; u < f.size(); ++u) s += in->mu[u] * std::pow(f[u], 2.0 * static_cast<double>(in->k));
    EXPECT_NEAR(v.lhs, std::pow(s, 1 / (2.0 * static_cast<double>(in->k))), 1e-12);
  }
  EXPECT_GE(done, 20);
}

TEST(Specpos, NonPositiveMeasureRejected) {
  const auto b0 = interval_bohr(kZ401, 60).members(), b1 = interval_bohr(kZ401, 2).members();
  const auto mu = DensityWeight::uniform_on(b1);  // interval: transform changes sign
  GroupSubset a(kZ401);
  for (auto x : b0.members())
    if (x % 3 == 0) a.insert(x);
  EXPECT_THROW(verify_specpos(a, b0, b1, mu, b1, 2, 0.5, 0.5), HypothesisFail);
}

// ---- sifting ----

TEST(Sift, FullDensityDegenerates) {
  const auto b0 = interval_bohr(kZ401, 100).members(), b1 = interval_bohr(kZ401, 1).members();
  EXPECT_THROW(sift(b0, b0, b1, b1, 7, 1.0, 0.5, 0.9, 1), HypothesisFail);
}

TEST(Sift, OutputsReverify) {
  std::mt19937_64 rng(5);
  int done = 0;
  for (int i = 0; i < 30 && done < 12; ++i) {
    auto in = draw_sift_instance(kZ401, rng);
    if (!in) continue;
    ++done;
    const auto out = sift(in->a, in->b0, in->b1, in->b2, in->k, in->alpha, in->epsilon, in->kappa, 100 + i);
    EXPECT_TRUE(out.verdict.pass);
    const auto& g = in->b0.group();
    EXPECT_TRUE(out.t.subset_of(in->b2.translate(out.z)));
    EXPECT_TRUE(out.s.negate().subset_of(in->b1.translate(out.w)));
    EXPECT_TRUE(in->b1.contains(out.z));
    EXPECT_TRUE(in->b2.contains(out.w));
    const GroupSubset a0 = in->a.intersect(in->b0);
    for (auto x : out.x_samples) {
      EXPECT_TRUE(in->b0.contains(x));
      for (auto t : out.t.members()) EXPECT_TRUE(a0.contains(g.sub(x, t)));
      for (auto s : out.s.members()) EXPECT_TRUE(a0.contains(g.add(x, s)));
    }
    EXPECT_EQ(out.density_t, ratio_of(out.t.size(), in->b2.size()));
    EXPECT_EQ(out.density_s, ratio_of(out.s.size(), in->b1.size()));
    const double floor = std::pow(in->alpha, 4.0 * static_cast<double>(in->k));
    EXPECT_GE(out.density_t, floor);
    EXPECT_GE(out.density_s, floor);
    // D from the oracle autocorrelation
    const auto f = oracle::autocorrelation(a0);
    const double thr = (1 + in->epsilon / 2) * in->alpha * in->alpha * in->b0.density();
    GroupSubset d(g);
    for (auto u : ((in->b2 + in->b1) - (in->b2 + in->b1)).members())
      if (f[u] > thr) d.insert(u);
    EXPECT_EQ(d, out.d);
    const double corr = static_cast<double>(count_pairs_in(d, out.t, out.s)) /
                        static_cast<double>(out.t.size() * out.s.size());
    EXPECT_EQ(corr, out.correlation);
    EXPECT_GE(corr, 1 - in->kappa);
  }
  EXPECT_GE(done, 10);
}

TEST(Sift, SeedDeterminism) {
  std::mt19937_64 rng(9);
  std::optional<SiftInstance> in;
  while (!in) in = draw_sift_instance(kZ401, rng);
  const auto a = sift(in->a, in->b0, in->b1, in->b2, in->k, in->alpha, in->epsilon, in->kappa, 77);
  const auto b = sift(in->a, in->b0, in->b1, in->b2, in->k, in->alpha, in->epsilon, in->kappa, 77);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

// ---- Riesz products and dissociation ----

TEST(Riesz, EmptyProductIsOne) {
  const auto g = FiniteGroup::cyclic(101);
  for (double v : riesz_product(g, {}, {})) EXPECT_EQ(v, 1.0);
}

TEST(Riesz, SingleCharacterIntegratesToOne) {
  const auto g = FiniteGroup::cyclic(101);
  const auto p = riesz_product(g, {7}, {cplx(1, 0)});
  double s = 0;
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    s += v;
  }
  EXPECT_NEAR(s / 101, 1.0, 1e-12);
}

TEST(Riesz, MatchesDirectFormula) {
  const auto g = FiniteGroup::cyclic(101);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit;
  for (int it = 0; it < 50; ++it) {
    std::vector<std::size_t> lam(1 + rng() % 4);
    std::vector<cplx> om(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
      lam[i] = rng() % 101;
      om[i] = std::polar(unit(rng), 2 * std::numbers::pi * unit(rng));
    }
    const auto p = riesz_product(g, lam, om);
    for (std::size_t x = 0; x < 101; ++x) {
      double want = 1;
      for (std::size_t i = 0; i < lam.size(); ++i) want *= 1 + (om[i] * oracle::chi(101, lam[i], x)).real();
      EXPECT_NEAR(p[x], want, 1e-12);
      EXPECT_GE(p[x], -1e-15);
    }
  }
}

TEST(Riesz, OmegaOutsideDiskRejected) {
  const auto g = FiniteGroup::cyclic(101);
  EXPECT_THROW(riesz_product(g, {1}, {cplx(1.01, 0)}), InputError);
}

TEST(Dissociation, Examples) {
  const auto g = FiniteGroup::cyclic(101);
  const auto mu = DensityWeight::uniform_on(GroupSubset::whole(g));
  EXPECT_FALSE(dissociation_test({5, 5}, mu, 10).classical);
  EXPECT_TRUE(dissociation_test({1}, mu, 10).classical);
  EXPECT_FALSE(dissociation_test({0}, mu, 10).classical);
  std::vector<std::size_t> big(21, 1);
  EXPECT_THROW(dissociation_test(big, mu, 10), InputError);
}

TEST(Dissociation, MatchesSigmaEnumeration) {
  const auto g = FiniteGroup::cyclic(101);
  const auto mu = DensityWeight::uniform_on(GroupSubset::whole(g));
  std::mt19937_64 rng(11);
  int dependent = 0;
  for (int it = 0; it < 400; ++it) {
    std::vector<std::size_t> lam(3);
    for (auto& l : lam) l = rng() % 101;
    if (it % 4 == 0) lam[2] = (lam[0] + lam[1]) % 101;  // plant a relation
    const bool want = dissociated_oracle(101, lam);
    dependent += !want;
    const auto r = dissociation_test(lam, mu, 5);
    EXPECT_EQ(r.classical, want);
    EXPECT_GE(r.riesz_lower_bound, 1 - 1e-12);  // omega = 0
  }
  EXPECT_GT(dependent, 50);
}

TEST(Dissociation, AscentBoundIsAttained) {
  const auto g = FiniteGroup::cyclic(101);
  const auto mu = DensityWeight::uniform_on(interval_bohr(g, 10).members());
  const auto r = dissociation_test({1, 2, 3}, mu, 20);
  const auto p = riesz_product(g, {1, 2, 3}, r.omega);
  double s = 0;
  for (std::size_t x = 0; x < 101; ++x) s += p[x] * mu[x];
  EXPECT_NEAR(s, r.riesz_lower_bound, 1e-9);
  EXPECT_GT(r.riesz_lower_bound, 1.5);  // a short interval correlates with low frequencies
}

// ---- local Chang ----

TEST(LocalChang, FullSetHasTrivialSpectrum) {
  const auto b0 = interval_bohr(kZ401, 100).members(), b1 = interval_bohr(kZ401, 2).members();
  const auto b2 = GroupSubset::singleton(kZ401, 0);
  const auto r = local_chang(b0, b0, b1, b2, 1.0, 0.1, 3);
  ASSERT_EQ(r.spectrum.size(), 1u);
  EXPECT_EQ(r.spectrum[0], 0u);
  EXPECT_TRUE(r.verdict.pass);
  EXPECT_EQ(r.verdict.lhs, 0.0);
}

TEST(LocalChang, RandomInstancesPassWithDirectMax) {
  std::mt19937_64 rng(21);
  int done = 0;
  for (int i = 0; i < 60 && done < 20; ++i) {
    auto in = draw_chang_instance(kZ401, rng);
    if (!in) continue;
    ++done;
    const auto r = local_chang(in->a, in->b0, in->b1, in->b2, in->epsilon, in->delta, static_cast<double>(in->k));
    EXPECT_TRUE(r.verdict.pass) << r.verdict.to_json().dump();
    EXPECT_LE(r.lambda.size(), in->k);
    // spectrum and maximum recomputed directly
    const GroupSubset a0 = in->a.intersect(in->b0);
    const double na = static_cast<double>(a0.size()), nb = static_cast<double>(in->b0.size());
    std::vector<std::size_t> spec;
    for (std::size_t u = 0; u < 401; ++u) {
      std::complex<double> s = 0;
      for (auto x : a0.members()) s += std::conj(oracle::chi(401, u, x));
      if (std::abs(s) / nb >= in->epsilon * na / nb - 1e-12) spec.push_back(u);
    }
    EXPECT_EQ(spec, r.spectrum);
    double worst = 0;
    for (auto x : (in->b2 - in->b2).members()) {
      bool in_b3 = true;
      for (auto l : r.lambda) in_b3 &= std::abs(1.0 - oracle::chi(401, l, x)) <= in->delta + 1e-12;
      if (!in_b3) continue;
      for (auto u : spec) worst = std::max(worst, std::abs(1.0 - oracle::chi(401, u, x)));
    }
    EXPECT_NEAR(worst, r.verdict.lhs, 1e-12);
  }
  EXPECT_GE(done, 15);
}

TEST(LocalChang, HypothesisFailure) {
  const auto b0 = interval_bohr(kZ401, 50).members(), b1 = interval_bohr(kZ401, 30).members();
  EXPECT_THROW(local_chang(b0, b0, b1, GroupSubset::singleton(kZ401, 0), 1.0, 0.1, 3), HypothesisFail);
}

// ---- Croot-Sisask ----

TEST(CrootSisask, WholeGroupSmoothingIsConstant) {
  const auto all = GroupSubset::whole(kZ401);
  const auto b0 = interval_bohr(kZ401, 3).members(), t = interval_bohr(kZ401, 40).members();
  RealFunction f(401, 0.0);
  for (std::size_t x = 0; x < 401; x += 3) f[x] = 1;
  const auto r = croot_sisask(f, all, t, b0, 2, 2, 2, 0.5, 1);
  EXPECT_EQ(r.x, b0.translate(kZ401.neg(r.t)));
  EXPECT_EQ(r.density, 1.0);
}

TEST(CrootSisask, TrivialPeriodOnly) {
  const auto all = GroupSubset::whole(kZ401);
  const auto zero = GroupSubset::singleton(kZ401, 0);
  RealFunction f(401, 0.0);
  f[5] = 1;
  const auto r = croot_sisask(f, zero, all, zero, 2, 2, 2, 0.5, 1);
  EXPECT_EQ(r.x, zero);
  EXPECT_EQ(r.verdict.lhs, 0.0);
  EXPECT_TRUE(r.verdict.pass);
}

TEST(CrootSisask, PeriodsRecertifyDirectly) {
  std::mt19937_64 rng(31);
  int done = 0;
  for (int i = 0; i < 40 && done < 15; ++i) {
    auto in = draw_cs_instance(kZ401, rng);
    if (!in) continue;
    ++done;
    const auto r = croot_sisask(in->f, in->s, in->t, in->b0, in->p, in->l, in->k, in->epsilon, 500 + i);
    EXPECT_TRUE(r.verdict.pass);
    EXPECT_TRUE(r.x.contains(0));
    EXPECT_TRUE(r.x.translate(r.t).subset_of(in->b0));
    // h = f * mu_S and the sup over s' of ||f||_{L_p(mu_{T+B0-B0-s'})}
    std::vector<double> h(401, 0.0);
    for (std::size_t y = 0; y < 401; ++y) {
      for (auto s : in->s.members()) h[y] += in->f[(y + 401 - s) % 401];
      h[y] /= static_cast<double>(in->s.size());
    }
    const auto spread = in->t + in->b0 - in->b0;
    double sup = 0;
    for (auto s : in->s.members()) {
      double acc = 0;
      for (auto y : spread.members()) acc += std::pow(std::abs(in->f[(y + 401 - s) % 401]), in->p);
      sup = std::max(sup, std::pow(acc / static_cast<double>(spread.size()), 1 / in->p));
    }
    for (auto x : r.x.members()) {
      double acc = 0;
      for (auto y : in->t.members()) acc += std::pow(std::abs(h[(y + x) % 401] - h[y]), in->p);
      EXPECT_LE(std::pow(acc / static_cast<double>(in->t.size()), 1 / in->p), in->epsilon * sup + 1e-9);
    }
  }
  EXPECT_GE(done, 10);
}

TEST(CrootSisask, GrowthHypothesisChecked) {
  const auto b0 = interval_bohr(kZ401, 20).members(), t = interval_bohr(kZ401, 2).members();
  RealFunction f(401, 1.0);
  EXPECT_THROW(croot_sisask(f, t, t, b0, 2, 2, 2, 0.5, 1), HypothesisFail);
}

// ---- proposition pipeline ----

TEST(PropD, EmptyAndFullTargets) {
  std::mt19937_64 rng(41);
  std::optional<PropDInstance> in;
  while (!in) in = draw_propd_instance(kZ401, rng);
  const auto empty = prop_d_pipeline(in->s, in->t, GroupSubset(kZ401), in->b0, in->b1, in->b2, in->b3, in->b4,
                                     in->epsilon, in->sigma, in->tau, in->l, in->m, 1);
  EXPECT_TRUE(empty.verdict.pass);
  EXPECT_EQ(empty.verdict.lhs, 0.0);
  EXPECT_DOUBLE_EQ(empty.verdict.rhs, -in->epsilon);
  const auto full = prop_d_pipeline(in->s, in->t, GroupSubset::whole(kZ401), in->b0, in->b1, in->b2, in->b3,
                                    in->b4, in->epsilon, in->sigma, in->tau, in->l, in->m, 1);
  EXPECT_TRUE(full.verdict.pass);
  EXPECT_EQ(full.verdict.lhs, 1.0);
  EXPECT_DOUBLE_EQ(full.verdict.rhs, 1 - in->epsilon);
}

TEST(PropD, PlantedInstancesPass) {
  for (const bool tuned : {false, true}) {
    ConstantBook book;
    if (tuned) {  // small implicit constants let the chain below B1 stay non-trivial
      book.set("llc", 1e-4);
      book.set("mzi", 1e-3);
    }
    std::mt19937_64 rng(tuned ? 43 : 42);
    int done = 0;
    for (int i = 0; i < 30 && done < 10; ++i) {
      auto in = draw_propd_instance(kZ401, rng, book);
      if (!in) continue;
      ++done;
      const auto r = prop_d_pipeline(in->s, in->t, in->d, in->b0, in->b1, in->b2, in->b3, in->b4, in->epsilon,
                                     in->sigma, in->tau, in->l, in->m, i, book);
      EXPECT_TRUE(r.verdict.pass) << r.verdict.to_json().dump();
      EXPECT_LE(static_cast<double>(r.b5.rank()), in->m);
      EXPECT_DOUBLE_EQ(r.b5.width(), book["c8"] * in->epsilon * in->sigma / in->m);
      const double corr = static_cast<double>(count_pairs_in(in->d, in->t, in->s)) /
                          static_cast<double>(in->t.size() * in->s.size());
      EXPECT_NEAR(r.verdict.rhs, corr - in->epsilon, 1e-12);
      // the game value bounds the uniform measure on the region from below
      EXPECT_LE(r.verdict.details.at("game_lower").get<double>(),
                r.verdict.details.at("uniform").get<double>() + 1e-9);
    }
    EXPECT_GE(done, 8);
  }
}

TEST(PropD, ChainViolationReported) {
  std::mt19937_64 rng(44);
  std::optional<PropDInstance> in;
  while (!in) in = draw_propd_instance(kZ401, rng);
  EXPECT_THROW(prop_d_pipeline(in->s, in->t, in->d, in->b0, in->b1, in->b1, in->b3, in->b4, in->epsilon, in->sigma,
                               in->tau, in->l, in->m, 1),
               HypothesisFail);
  EXPECT_THROW(prop_d_pipeline(in->s, in->t, in->d, in->b0, in->b1, in->b2, in->b3, in->b4, in->epsilon, in->sigma,
                               in->tau, in->l, 2.5, 1),
               InputError);
}

// ---- iteration step ----

TEST(IterationStep, FullSetGivesManySolutions) {
  const ConstantBook book;
  const auto b0 = interval_bohr(kZ401, 150).members(), b1 = interval_bohr(kZ401, 1).members();
  const auto zero = GroupSubset::singleton(kZ401, 0);
  const auto d = fourfold_measure(b1, zero).support();
  const double la = std::log(2.0);
  const auto k = static_cast<std::size_t>(std::ceil(book.spec() * la));
  const auto l = static_cast<std::size_t>(std::ceil(book.spec3() * static_cast<double>(k) * la));
  const double m = std::ceil(book.spec2() * static_cast<double>(l * l * k * k) * la * la);
  const auto out = iteration_step(b0, d, b0, b1, zero, zero, zero, zero, k, l, m, 1.0, 1.0, 1, book);
  ASSERT_TRUE(out.many_solutions());
  EXPECT_TRUE(out.verdict.pass);
  // <1_B0 * 1_-B0, 1_D>_{L2(mu)} with |B0 cap (B0+u)| = 301 - |u|
  const auto mu = fourfold_measure(b1, zero);
  double want = 0;
  for (auto u : d.members()) want += mu[u] * (301.0 - std::abs(static_cast<double>(kZ401.centred(u)))) / 401.0;
  EXPECT_NEAR(out.correlation, want, 1e-12);
  EXPECT_NEAR(out.threshold, 0.5 * 301.0 / 401.0, 1e-12);
}

TEST(IterationStep, RandomChainsAtDeskScale) {
  std::mt19937_64 rng(51);
  int done = 0;
  for (int i = 0; i < 20 && done < 8; ++i) {
    auto in = draw_itstep_instance(kZ401, rng, false);
    if (!in) continue;
    ++done;
    const auto out = iteration_step(in->a, in->d, in->b0, in->b1, in->b2, in->b3, in->b4, in->b5, in->k, in->l,
                                    in->m, in->alpha, in->delta, i);
    EXPECT_TRUE(out.verdict.pass);
  }
  EXPECT_GE(done, 5);
}

TEST(IterationStep, PlantedParityGivesIncrement) {
  const auto g = FiniteGroup::cyclic(1009);
  const auto book = relaxed_itstep_book();
  std::mt19937_64 rng(7);
  auto in = draw_itstep_instance(g, rng, true, book);
  ASSERT_TRUE(in);
  const auto out = iteration_step(in->a, in->d, in->b0, in->b1, in->b2, in->b3, in->b4, in->b5, in->k, in->l, in->m,
                                  in->alpha, in->delta, 0, book);
  ASSERT_FALSE(out.many_solutions());
  EXPECT_EQ(out.correlation, 0.0);  // no odd differences inside the even points
  ASSERT_TRUE(out.b6 && out.specpos && out.sifted && out.propd);
  EXPECT_TRUE(out.specpos->pass);
  EXPECT_TRUE(out.sifted->verdict.pass);
  EXPECT_TRUE(out.propd->verdict.pass);
  // re-certify the density from the Bohr set data alone
  const BohrSet b6(g, out.b6->frequencies(), out.b6->width());
  const auto region = b6.members().intersect(in->b5 - in->b5);
  const auto gv = game_density(in->a.intersect(in->b0), region);
  EXPECT_EQ(gv.lower, out.measured_density);
  EXPECT_GE(out.measured_density, (1 + book["c32"]) * in->alpha);
  EXPECT_TRUE(out.verdict.pass);
}

TEST(IterationStep, ViolatedChainFails) {
  const ConstantBook book;
  const auto b0 = interval_bohr(kZ401, 150).members();
  const auto zero = GroupSubset::singleton(kZ401, 0);
  EXPECT_THROW(iteration_step(b0, b0, b0, b0, zero, zero, zero, zero, 67, 5000, 1e24, 1.0, 1.0, 1, book),
               HypothesisFail);
}
