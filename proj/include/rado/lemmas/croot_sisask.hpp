#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rado/constants.hpp"
#include "rado/lemmas/common.hpp"

namespace rado {

struct AlmostPeriodSet {
  std::size_t t = 0;
  GroupSubset x;
  double density = 0;        // mu_{B0 - t}(X)
  double density_bound = 0;  // K^{-csl eps^-2 L^{2/p} p}
  double p = 2, l = 2, k = 2, epsilon = 1;
  std::size_t samples = 0;
  double good_sample_rate = -1;  // fraction of sampled s in the good event; -1 if skipped
  LemmaVerdict verdict;

  nlohmann::json to_json() const {
    return {{"t", t},
            {"X", x.members()},
            {"density", density},
            {"density_bound", density_bound},
            {"p", p},
            {"L", l},
            {"K", k},
            {"epsilon", epsilon},
            {"samples", samples},
            {"good_sample_rate", good_sample_rate},
            {"verdict", verdict.to_json()}};
  }
};

// f * mu_S (y) = E_{s in S} f(y - s).
inline RealFunction smooth_by(const RealFunction& f, const GroupSubset& s) {
  const auto& g = s.group();
  RealFunction out(g.order(), 0.0);
  const auto sm = s.members();
  for (std::size_t y = 0; y < g.order(); ++y) {
    double acc = 0;
    for (auto v : sm) acc += f[g.sub(y, v)];
    out[y] = acc / static_cast<double>(sm.size());
  }
  return out;
}

// ||f||_{L_p(mu_E)}.
inline double lp_on(const RealFunction& f, const GroupSubset& e, double p) {
  double s = 0;
  const auto m = e.members();
  for (auto y : m) s += std::pow(std::abs(f[y]), p);
  return std::pow(s / static_cast<double>(m.size()), 1.0 / p);
}

// || rho_x h - h ||_{L_p(mu_T)} for every x in G.
inline RealFunction translate_defects(const RealFunction& h, const GroupSubset& t, double p) {
  const auto& g = t.group();
  const auto tm = t.members();
  RealFunction out(g.order(), 0.0);
  for (std::size_t x = 0; x < g.order(); ++x) {
    double s = 0;
    for (auto y : tm) s += std::pow(std::abs(h[g.add(y, x)] - h[y]), p);
    out[x] = std::pow(s / static_cast<double>(tm.size()), 1.0 / p);
  }
  return out;
}

inline AlmostPeriodSet croot_sisask(const RealFunction& f, const GroupSubset& s, const GroupSubset& t,
                                    const GroupSubset& b0, double p, double l, double k, double epsilon,
                                    std::uint64_t seed, const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "cs";
  v.seed = seed;
  v.book_hash = book.hash();
  const auto& g = b0.group();
  if (s.empty() || t.empty() || b0.empty()) throw InputError("croot_sisask: empty set");
  if (f.size() != g.order()) throw InputError("croot_sisask: function size mismatch");
  if (!(p >= 2 && l >= 2 && k >= 2)) throw InputError("croot_sisask: p, L, K must be at least 2");
  if (!(epsilon > 0 && epsilon <= 1)) throw InputError("croot_sisask: epsilon must lie in (0,1]");
  const GroupSubset spread = t + b0 - b0;
  v.require(make_check("mu(T+B0-B0)/mu(T)", ratio_of(spread.size(), t.size()), l, true));
  v.require(make_check("mu(S+B0)/mu(S)", growth_of(s, b0), k, true));

  double sup_norm_f = 0;
  for (auto sp : s.members()) sup_norm_f = std::max(sup_norm_f, lp_on(f, spread.translate(g.neg(sp)), p));
  const double exponent = std::pow(l, 2 / p) * p / (epsilon * epsilon);
  AlmostPeriodSet out{0, GroupSubset(g), 0, 0, 2, 2, 2, 1, 0, -1, {}};
  out.p = p;
  out.l = l;
  out.k = k;
  out.epsilon = epsilon;
  out.samples = static_cast<std::size_t>(std::ceil(64 * book["mzi"] * exponent));
  out.density_bound = std::pow(k, -book.csl() * exponent);

  const RealFunction h = smooth_by(f, s);
  // Sampling telemetry: how often the empirical average lands in the good event.
  // Skipped when one trial would exceed ~2e7 evaluations.
  if (static_cast<double>(out.samples) * static_cast<double>(spread.size()) <= 2e7) {
    std::mt19937_64 rng(seed);
    const auto sm = s.members();
    std::uniform_int_distribution<std::size_t> pick(0, sm.size() - 1);
    const double good = epsilon / (2 * std::pow(l, 1 / p)) * sup_norm_f;
    const auto sp = spread.members();
    const int trials = 16;
    int hits = 0;
    std::vector<double> avg(g.order());
    for (int trial = 0; trial < trials; ++trial) {
      std::fill(avg.begin(), avg.end(), 0.0);
      for (std::size_t i = 0; i < out.samples; ++i) {
        const auto si = sm[pick(rng)];
        for (auto y : sp) avg[y] += f[g.sub(y, si)];
      }
      double acc = 0;
      for (auto y : sp) acc += std::pow(std::abs(avg[y] / static_cast<double>(out.samples) - h[y]), p);
      hits += std::pow(acc / static_cast<double>(sp.size()), 1 / p) <= good;
    }
    out.good_sample_rate = static_cast<double>(hits) / trials;
  }

  // Certified periods: every t in B0, X_t = {x in B0 - t : defect(x) <= eps sup}.
  const double thr = epsilon * sup_norm_f;
  const auto defect = translate_defects(h, t, p);
  GroupSubset ok(g);
  for (std::size_t x = 0; x < g.order(); ++x)
    if (defect[x] <= thr) ok.insert(x);
  std::size_t best = 0, best_t = 0;
  for (auto tt : b0.members()) {
    const std::size_t c = b0.translate(g.neg(tt)).intersect(ok).size();
    if (c > best) {
      best = c;
      best_t = tt;
    }
  }
  out.t = best_t;
  out.x = b0.translate(g.neg(best_t)).intersect(ok);
  if (out.x.empty()) throw ConstantsMismatch("croot_sisask: no certified almost period");
  out.density = ratio_of(out.x.size(), b0.size());
  double worst = 0;
  for (auto x : out.x.members()) worst = std::max(worst, defect[x]);
  v.details = {{"density", out.density},         {"density_bound", out.density_bound},
               {"density_shortfall", out.density < out.density_bound},
               {"samples", out.samples},         {"good_sample_rate", out.good_sample_rate},
               {"contains_zero", out.x.contains(0)}};
  v.conclude(worst, thr, false);
  out.verdict = v;
  return out;
}

}  // namespace rado
