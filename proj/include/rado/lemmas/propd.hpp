#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "rado/matrix_game.hpp"
#include "rado/lemmas/chang.hpp"
#include "rado/lemmas/croot_sisask.hpp"
#include "rado/lemmas/sift.hpp"

namespace rado {

struct PropDResult {
  BohrSet b5;
  AlmostPeriodSet periods;
  LocalChangResult chang;
  LemmaVerdict verdict;

  nlohmann::json to_json() const {
    return {{"B5", b5.to_json()},
            {"periods", periods.to_json()},
            {"chang", chang.verdict.to_json()},
            {"verdict", verdict.to_json()}};
  }
};

// max_x (1_D * nu)(x) for an explicit measure nu.
inline double sup_of_smoothing(const GroupSubset& d, const DensityWeight& nu) {
  const auto& g = d.group();
  const auto supp = nu.support().members();
  double best = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    double s = 0;
    for (auto y : supp)
      if (d.contains(g.sub(x, y))) s += nu[y];
    best = std::max(best, s);
  }
  return best;
}

inline PropDResult prop_d_pipeline(const GroupSubset& s, const GroupSubset& t, const GroupSubset& d,
                                   const GroupSubset& b0, const GroupSubset& b1, const GroupSubset& b2,
                                   const GroupSubset& b3, const GroupSubset& b4, double epsilon, double sigma,
                                   double tau, std::size_t l, double m, std::uint64_t seed,
                                   const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "propd";
  v.seed = seed;
  v.book_hash = book.hash();
  const auto& g = b0.group();
  if (!g.is_cyclic()) throw InputError("prop_d_pipeline: Z/pZ only");
  for (double x : {epsilon, sigma, tau})
    if (!(x > 0 && x <= 1)) throw InputError("prop_d_pipeline: epsilon, sigma, tau must lie in (0,1]");
  if (s.empty() || t.empty()) throw InputError("prop_d_pipeline: S and T must be non-empty");
  if (b0.empty() || b1.empty() || b2.empty() || b3.empty() || b4.empty())
    throw InputError("prop_d_pipeline: empty chain set");
  if (l < 1) throw InputError("prop_d_pipeline: l must be positive");
  require_natural(m, "prop_d_pipeline: m");

  const double ll = static_cast<double>(l), mm = m;
  v.require(make_check("l >= L log(2/(sigma eps))", ll, book.big_l() * std::log(2 / (sigma * epsilon)), false));
  v.require(make_check("m >= pd eps^-2 l^2 log(2/tau) log(2/sigma)", mm,
                       book.pd() / (epsilon * epsilon) * ll * ll * std::log(2 / tau) * std::log(2 / sigma), false));
  const GroupSubset lb2 = (b2 - b2).multiple(l);
  v.require(make_check("mu(B0-B1+l(B2-B2))/mu(B0)", ratio_of((b0 - b1 + lb2).size(), b0.size()), 2, true));
  v.require(make_check("mu(B0+B2)/mu(B0)", growth_of(b0, b2), 2, true));
  v.require(make_check("mu(B1+l(B2-B2))/mu(B1)", growth_of(b1, lb2), 2, true));
  v.require(make_check("mu(B2+mB3)/mu(B2)", growth_of(b2, multiple_of(b3, m)), 2, true));
  v.require(make_check("mu(B4+B3)/mu(B3)", growth_of(b3, b4), 1 + book.c962() * epsilon * sigma, true));
  const GroupSubset ns = s.negate();
  v.require(make_check("-S in B0", ns.subset_of(b0) ? 1 : 0, 1, false, 0));
  v.require(make_check("T in B1", t.subset_of(b1) ? 1 : 0, 1, false, 0));
  v.require(make_check("mu_B0(-S)", relative_density(ns, b0), sigma, false));
  v.require(make_check("mu_B1(T)", relative_density(t, b1), tau, false));

  // Almost periods of 1_D * mu_{-S} along B1 + (l-1)(B2-B2).
  RealFunction fd(g.order(), 0.0);
  for (auto u : d.members()) fd[u] = 1.0;
  const double p = 2 * std::log2(2 / tau);
  AlmostPeriodSet periods = [&] {
    try {
      return croot_sisask(fd, ns, b1 + (b2 - b2).multiple(l - 1), b2, std::max(p, 2.0), 2, 2 / sigma,
                          epsilon / (4 * ll), seed, book);
    } catch (const HypothesisFail& e) {
      throw HypothesisFail("propd/" + e.lemma(), e.hypothesis(), e.measured(), e.required());
    }
  }();

  const GroupSubset xt = periods.x.translate(periods.t);
  LocalChangResult chang = [&] {
    try {
      return local_chang(xt, b2, b3, b4, 0.5, book["c8"] * epsilon * sigma / mm, m, book);
    } catch (const HypothesisFail& e) {
      throw HypothesisFail("propd/" + e.lemma(), e.hypothesis(), e.measured(), e.required());
    }
  }();
  if (!chang.verdict.pass) throw ConstantsMismatch("propd: local Chang bound failed");

  // Target region B5 cap (B4 - B4); the game value covers every probability measure on it.
  const GroupSubset region = chang.b3.members().intersect(b4 - b4);
  const double target = sift_correlation(d, t, s) - epsilon;
  double worst_point = 1, uniform = 0, game = 0;
  if (d.empty()) {
    worst_point = 0;
  } else {
    for (auto x : region.members())
      worst_point = std::min(worst_point, sup_of_smoothing(d, DensityWeight::point_mass(g, x)));
  }
  uniform = sup_of_smoothing(d, DensityWeight::uniform_on(region));
  game = game_density(d, region).lower;
  v.details = {{"rank", chang.b3.rank()},        {"width", chang.b3.width()},
               {"region_size", region.size()},   {"point_mass_min", worst_point},
               {"uniform", uniform},             {"game_lower", game},
               {"correlation", target + epsilon}, {"period_density", periods.density},
               {"p", p}};
  v.conclude(std::min({worst_point, uniform, game}), target);
  return {chang.b3, std::move(periods), std::move(chang), v};
}

}  // namespace rado
