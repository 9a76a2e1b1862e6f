#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "rado/bohr.hpp"
#include "rado/constants.hpp"
#include "rado/lemmas/common.hpp"

namespace rado {

// B({1}, 2 sin(pi r / p)) = {-r, ..., r}.
inline BohrSet interval_bohr(const FiniteGroup& g, std::int64_t r) {
  const double w = 2.0 * std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(g.modulus()));
  return BohrSet(g, {1}, std::max(w, 1e-15));
}

// Union of `runs` disjoint runs inside {-r..r} covering about `alpha` of it.
inline GroupSubset run_set(const FiniteGroup& g, std::int64_t r, double alpha, int runs, std::mt19937_64& rng) {
  const std::int64_t len = 2 * r + 1;
  const std::int64_t total = std::max<std::int64_t>(1, std::llround(alpha * static_cast<double>(len)));
  const std::int64_t each = std::max<std::int64_t>(1, total / runs);
  const std::int64_t slot = len / runs;
  GroupSubset a(g);
  for (int i = 0; i < runs; ++i) {
    const std::int64_t room = std::max<std::int64_t>(0, slot - each);
    const std::int64_t start = -r + i * slot + (room > 0 ? static_cast<std::int64_t>(rng() % (room + 1)) : 0);
    for (std::int64_t x = start; x < start + each && x <= r; ++x) a.insert(g.from_int(x));
  }
  return a;
}

struct SiftInstance {
  GroupSubset a, b0, b1, b2;
  std::size_t k = 1;
  double alpha = 0, epsilon = 0, kappa = 0;
};

struct GeneratorStats {
  std::size_t drawn = 0, accepted = 0;
  double rate() const { return drawn ? static_cast<double>(accepted) / static_cast<double>(drawn) : 0.0; }
  nlohmann::json to_json() const { return {{"drawn", drawn}, {"accepted", accepted}, {"rate", rate()}}; }
};

// Intervals B0 = {-n0..n0}, B1, B2 short intervals, A a few long runs; k is the
// least value for which every hypothesis of the sifting lemma holds.
inline std::optional<SiftInstance> draw_sift_instance(const FiniteGroup& g, std::mt19937_64& rng,
                                                      const ConstantBook& book = {}) {
  const std::int64_t p = g.modulus();
  const std::int64_t n0 = p / 4 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 6 + 1));
  const std::int64_t r1 = 1 + static_cast<std::int64_t>(rng() % 3), r2 = 1 + static_cast<std::int64_t>(rng() % 3);
  const double target = 0.45 + 0.1 * std::uniform_real_distribution<double>()(rng);
  const int runs = 1 + static_cast<int>(rng() % 2);
  SiftInstance inst{run_set(g, n0, target, runs, rng), interval_bohr(g, n0).members(),
                    interval_bohr(g, r1).members(), interval_bohr(g, r2).members()};
  inst.kappa = 0.9;
  inst.alpha = relative_density(inst.a, inst.b0);
  const auto f = autocorrelation(inst.a.intersect(inst.b0));
  const auto mu = fourfold_measure(inst.b1, inst.b2);
  const double scale = inst.alpha * inst.alpha * inst.b0.density();
  const double growth = ratio_of((inst.b2 + inst.b1 + inst.b0).size(), inst.b0.size());
  for (std::size_t k = 1; k <= 12; ++k) {
    const double kk = static_cast<double>(k);
    const double eps = std::min(1.0, lp_norm(f, mu, 2 * kk) / scale - 1) * (1 - 1e-9);
    if (!(eps > 0)) continue;
    if (kk < book["rdc"] / eps * std::log(2 / inst.kappa)) continue;
    if (std::pow((1 + eps / 2) / (1 + 0.75 * eps), 2 * kk) > inst.kappa / 2) continue;
    if (growth > 1 + eps * inst.alpha * inst.alpha / 4) continue;
    inst.k = k;
    inst.epsilon = eps;
    return inst;
  }
  return std::nullopt;
}

}  // namespace rado

namespace rado {

struct SpecposInstance {
  GroupSubset a, b0, b1, d;
  DensityWeight mu;
  std::size_t k = 1;
  double epsilon = 0, eta = 0;
};

// mu = mu_B1 * mu~_B1 (positive definite, supported on B1 - B1); A random or runs
// inside B0; D a random part of B1 - B1. epsilon and eta are the measured values.
inline std::optional<SpecposInstance> draw_specpos_instance(const FiniteGroup& g, std::mt19937_64& rng) {
  const std::int64_t p = g.modulus();
  const std::int64_t n0 = p / 8 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 4));
  const std::int64_t r1 = 1 + static_cast<std::int64_t>(rng() % 4);
  const auto b0 = interval_bohr(g, n0).members(), b1 = interval_bohr(g, r1).members();
  const double target = 0.2 + 0.6 * std::uniform_real_distribution<double>()(rng);
  GroupSubset a(g);
  if (rng() % 2) {
    a = run_set(g, n0, target, 1 + static_cast<int>(rng() % 3), rng);
  } else {
    std::bernoulli_distribution coin(target);
    for (auto x : b0.members())
      if (coin(rng)) a.insert(x);
  }
  GroupSubset d(g);
  for (auto u : (b1 - b1).members())
    if (rng() % 2) d.insert(u);
  if (a.empty() || d.empty()) return std::nullopt;
  const auto m1 = DensityWeight::uniform_on(b1);
  SpecposInstance inst{a, b0, b1, d, m1.convolve(m1.reflect())};
  inst.k = 1 + rng() % 6;
  inst.eta = growth_of(b0, b1) - 1;
  const double alpha = relative_density(a, b0), delta = inst.mu.measure(d);
  const auto f = autocorrelation(a.intersect(b0));
  double pairing = 0;
  for (auto u : d.members()) pairing += inst.mu[u] * f[u];
  const double scale = delta * alpha * alpha * b0.density();
  inst.epsilon = std::min(1.0, std::abs(pairing - scale) / scale * (1 - 1e-9));
  if (!(inst.eta > 0 && inst.eta <= 1) || !(inst.epsilon > 1e-6)) return std::nullopt;
  return inst;
}

}  // namespace rado

namespace rado {

struct ChangInstance {
  GroupSubset a, b0, b1, b2;
  double epsilon = 0, delta = 0;
  std::size_t k = 1;
};

// B0 = {-n0..n0}; B1 short enough that B0 + k B1 at most doubles B0; B2 inside B1.
inline std::optional<ChangInstance> draw_chang_instance(const FiniteGroup& g, std::mt19937_64& rng,
                                                        const ConstantBook& book = {}) {
  const std::int64_t p = g.modulus();
  const std::int64_t n0 = p / 8 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 5));
  const double target = 0.3 + 0.5 * std::uniform_real_distribution<double>()(rng);
  GroupSubset a = rng() % 2 ? run_set(g, n0, target, 1 + static_cast<int>(rng() % 3), rng) : GroupSubset(g);
  const auto b0 = interval_bohr(g, n0).members();
  if (a.empty()) {
    std::bernoulli_distribution coin(target);
    for (auto x : b0.members())
      if (coin(rng)) a.insert(x);
  }
  const double alpha = relative_density(a, b0);
  if (alpha <= 0) return std::nullopt;
  const double eps = 0.5 + 0.5 * std::uniform_real_distribution<double>()(rng);
  const auto k = static_cast<std::size_t>(std::ceil(book["llc"] / (eps * eps) * std::log(2 / alpha)));
  const std::int64_t r1 = std::max<std::int64_t>(1, n0 / static_cast<std::int64_t>(k) / 2);
  const std::int64_t r2 = std::max<std::int64_t>(0, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(r1 + 1)));
  ChangInstance inst{a, b0, interval_bohr(g, r1).members(),
                     r2 == 0 ? GroupSubset::singleton(g, 0) : interval_bohr(g, r2).members()};
  inst.epsilon = eps;
  inst.k = k;
  inst.delta = 0.01 + 0.2 * std::uniform_real_distribution<double>()(rng);
  if (growth_of(inst.b0, inst.b1.multiple(k)) > 2) return std::nullopt;
  if (growth_of(inst.b1, inst.b2) > 2) return std::nullopt;
  return inst;
}

}  // namespace rado

namespace rado {

struct CsInstance {
  RealFunction f;
  GroupSubset s, t, b0;
  double p = 2, l = 2, k = 2, epsilon = 1;
};

// Interval B0, T, S with the two growth hypotheses at L = 2 and the least
// admissible K; f the indicator of a random or run-structured set.
inline std::optional<CsInstance> draw_cs_instance(const FiniteGroup& g, std::mt19937_64& rng) {
  const std::int64_t p = g.modulus();
  const std::int64_t r0 = 1 + static_cast<std::int64_t>(rng() % 4);
  const std::int64_t rt = 2 * r0 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 8));
  const std::int64_t rs = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 6));
  CsInstance inst{RealFunction(g.order(), 0.0), interval_bohr(g, rs).members(), interval_bohr(g, rt).members(),
                  interval_bohr(g, r0).members()};
  if (rs == 0) inst.s = GroupSubset::singleton(g, 0);
  GroupSubset d = rng() % 2 ? run_set(g, p / 3, 0.5, 1 + static_cast<int>(rng() % 4), rng) : GroupSubset(g);
  if (d.empty()) {
    for (std::size_t x = 0; x < g.order(); ++x)
      if (rng() % 2) d.insert(x);
  }
  inst.f = d.indicator();
  inst.l = 2;
  inst.k = std::max(2.0, growth_of(inst.s, inst.b0));
  inst.epsilon = 0.25 + 0.75 * std::uniform_real_distribution<double>()(rng);
  if (ratio_of((inst.t + inst.b0 - inst.b0).size(), inst.t.size()) > inst.l) return std::nullopt;
  return inst;
}

}  // namespace rado

namespace rado {

inline GroupSubset interval_set(const FiniteGroup& g, std::int64_t r) {
  return r <= 0 ? GroupSubset::singleton(g, 0) : interval_bohr(g, r).members();
}

// Largest r in [0, cap] with ok(interval_set(g, r)); ok is assumed monotone.
template <class Pred>
std::int64_t largest_radius(const FiniteGroup& g, std::int64_t cap, Pred ok) {
  std::int64_t r = 0;
  while (r < cap && ok(interval_set(g, r + 1))) ++r;
  return r;
}

struct PropDInstance {
  GroupSubset s, t, d, b0, b1, b2, b3, b4;
  double epsilon = 1, sigma = 1, tau = 1;
  std::size_t l = 1;
  double m = 1;
};

// -S and T run-structured inside intervals B0, B1; D a random part of S + T.
// l, m are the least admissible values and B2, B3, B4 the widest intervals
// meeting the chain inequalities at those values.
inline std::optional<PropDInstance> draw_propd_instance(const FiniteGroup& g, std::mt19937_64& rng,
                                                        const ConstantBook& book = {}) {
  std::uniform_real_distribution<double> unit;
  const std::int64_t p = g.modulus();
  const std::int64_t n0 = p / 8 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 8 + 1));
  const std::int64_t r1 = n0 / 3 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n0 / 3 + 1));
  PropDInstance in{GroupSubset(g), GroupSubset(g), GroupSubset(g), interval_set(g, n0), interval_set(g, r1),
                   GroupSubset(g), GroupSubset(g), GroupSubset(g)};
  in.s = run_set(g, n0, 0.4 + 0.4 * unit(rng), 1 + static_cast<int>(rng() % 3), rng).negate();
  in.t = run_set(g, r1, 0.4 + 0.4 * unit(rng), 1 + static_cast<int>(rng() % 3), rng);
  const double keep = 0.5 + 0.5 * unit(rng);
  for (auto u : (in.s + in.t).members())
    if (unit(rng) < keep) in.d.insert(u);
  in.epsilon = 0.5 + 0.5 * unit(rng);
  in.sigma = relative_density(in.s.negate(), in.b0);
  in.tau = relative_density(in.t, in.b1);
  const double l = std::ceil(book.big_l() * std::log(2 / (in.sigma * in.epsilon)));
  const double m = std::ceil(book.pd() / (in.epsilon * in.epsilon) * l * l * std::log(2 / in.tau) *
                             std::log(2 / in.sigma));
  in.l = static_cast<std::size_t>(l);
  in.m = m;
  const auto r2 = largest_radius(g, r1, [&](const GroupSubset& b2) {
    const GroupSubset lb2 = (b2 - b2).multiple(in.l);
    return (in.b0 - in.b1 + lb2).size() <= 2 * in.b0.size() && growth_of(in.b0, b2) <= 2 &&
           growth_of(in.b1, lb2) <= 2;
  });
  in.b2 = interval_set(g, r2);
  in.b3 = interval_set(g, largest_radius(g, r2, [&](const GroupSubset& b3) {
                         return growth_of(in.b2, multiple_of(b3, in.m)) <= 2;
                       }));
  const double cap = 1 + book.c962() * in.epsilon * in.sigma;
  in.b4 = interval_set(g, largest_radius(g, p / 2, [&](const GroupSubset& b4) { return growth_of(in.b3, b4) <= cap; }));
  if (growth_of(in.b3, in.b4) > cap) return std::nullopt;
  return in;
}

struct ItstepInstance {
  GroupSubset a, d, b0, b1, b2, b3, b4, b5;
  std::size_t k = 1, l = 1;
  double m = 1;
  double alpha = 1, delta = 1;
};

// Interval chain with the widest radii the lemma's growth conditions allow.
// parity = true plants A = even points of B0 and D = odd points of the
// support of the four-fold measure, which forces the increment branch once
// B1 + B2 is large enough to carry odd mass.
inline std::optional<ItstepInstance> draw_itstep_instance(const FiniteGroup& g, std::mt19937_64& rng, bool parity,
                                                          const ConstantBook& book = {}) {
  std::uniform_real_distribution<double> unit;
  const std::int64_t p = g.modulus();
  const std::int64_t n0 = p / 4 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p / 8 + 1));
  ItstepInstance in{GroupSubset(g), GroupSubset(g), interval_set(g, n0), GroupSubset(g), GroupSubset(g),
                    GroupSubset(g), GroupSubset(g), GroupSubset(g)};
  if (parity) {
    for (auto x : in.b0.members())
      if (g.centred(x) % 2 == 0) in.a.insert(x);
  } else {
    in.a = run_set(g, n0, 0.3 + 0.6 * unit(rng), 1 + static_cast<int>(rng() % 3), rng);
  }
  in.alpha = relative_density(in.a, in.b0);
  const double a = in.alpha;
  // -B1-B2+B0 and B2+B1+B0 are both {-(n0+R)..n0+R} for intervals of radii summing to R.
  const auto big_r = largest_radius(g, p / 2, [&](const GroupSubset& br) {
    return growth_of(in.b0, br) <= std::min(1 + book.c_me() * a, 1 + book["c16"] * a * a);
  });
  in.b2 = interval_set(g, big_r / 2);
  in.b1 = interval_set(g, big_r - big_r / 2);
  const DensityWeight mu = fourfold_measure(in.b1, in.b2);
  if (parity) {
    for (auto u : mu.support().members())
      if (g.centred(u) % 2 != 0) in.d.insert(u);
  } else {
    const double keep = 0.3 + 0.7 * unit(rng);
    for (auto u : mu.support().members())
      if (u == 0 || unit(rng) < keep) in.d.insert(u);
  }
  in.delta = mu.measure(in.d);
  if (!(in.delta > 0)) return std::nullopt;
  const double la = std::log(2 / a);
  const double k = std::max(1.0, std::ceil(book.spec() * std::log(2 / in.delta)));
  const double l = std::ceil(book.spec3() * k * la);
  const double m = std::ceil(book.spec2() * l * l * k * k * la * la);
  in.k = static_cast<std::size_t>(k);
  in.l = static_cast<std::size_t>(l);
  in.m = m;
  in.b3 = interval_set(g, largest_radius(g, p / 2, [&](const GroupSubset& b3) {
                         const GroupSubset lb3 = (b3 - b3).multiple(in.l);
                         return ratio_of((in.b1 - in.b2 + lb3).size(), in.b1.size()) <= 2 &&
                                growth_of(in.b1, b3) <= 2 && growth_of(in.b2, lb3) <= 2;
                       }));
  in.b4 = interval_set(g, largest_radius(g, p / 2, [&](const GroupSubset& b4) {
                         return growth_of(in.b3, multiple_of(b4, in.m)) <= 2;
                       }));
  const double cap = 1 + book.c96() * std::pow(a, 4 * k);
  in.b5 = interval_set(g, largest_radius(g, p / 2, [&](const GroupSubset& b5) { return growth_of(in.b4, b5) <= cap; }));
  if (growth_of(in.b4, in.b5) > cap) return std::nullopt;
  return in;
}

}  // namespace rado
