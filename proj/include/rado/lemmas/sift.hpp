#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rado/constants.hpp"
#include "rado/lemmas/common.hpp"

namespace rado {

struct SiftOutput {
  GroupSubset t, s, d;
  std::size_t z = 0, w = 0;
  std::vector<std::size_t> x_samples;
  double density_t = 0;  // mu_{B2+z}(T)
  double density_s = 0;  // mu_{-B1-w}(S)
  double correlation = 0;  // <1_D, mu_T * mu_S>
  std::size_t retries_used = 0;
  std::size_t tuples_tried = 0;
  LemmaVerdict verdict;

  nlohmann::json to_json() const {
    return {{"T", t.members()},          {"S", s.members()},        {"z", z},
            {"w", w},                    {"x", x_samples},          {"density_T", density_t},
            {"density_S", density_s},    {"correlation", correlation}, {"retries", retries_used},
            {"tuples", tuples_tried},    {"verdict", verdict.to_json()}};
  }
};

// D = {u in -B1-B2+B2+B1 : 1_A' * 1_-A'(u) > (1 + eps/2) alpha^2 mu(B0)}, A' = A cap B0.
inline GroupSubset sift_target(const GroupSubset& a, const GroupSubset& b0, const GroupSubset& b1,
                               const GroupSubset& b2, double alpha, double epsilon) {
  const auto f = autocorrelation(a.intersect(b0));
  const GroupSubset range = (b2 + b1) - (b2 + b1);
  GroupSubset d(a.group());
  const double thr = (1 + epsilon / 2) * alpha * alpha * b0.density();
  for (auto u : range.members())
    if (f[u] > thr) d.insert(u);
  return d;
}

// <1_D, mu_T * mu_S> as an exact count ratio.
inline double sift_correlation(const GroupSubset& d, const GroupSubset& t, const GroupSubset& s) {
  const auto& g = d.group();
  std::uint64_t hits = 0;
  const auto sm = s.members();
  for (auto x : t.members())
    for (auto y : sm) hits += d.contains(g.add(x, y));
  return static_cast<double>(hits) / (static_cast<double>(t.size()) * static_cast<double>(sm.size()));
}

inline SiftOutput sift(const GroupSubset& a, const GroupSubset& b0, const GroupSubset& b1, const GroupSubset& b2,
                       std::size_t k, double alpha, double epsilon, double kappa, std::uint64_t seed,
                       const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "sift";
  v.seed = seed;
  v.book_hash = book.hash();
  const auto& g = b0.group();
  if (b0.empty() || b1.empty() || b2.empty()) throw InputError("sift: empty Bohr set");
  for (double x : {alpha, epsilon, kappa})
    if (!(x > 0 && x <= 1)) throw InputError("sift: alpha, epsilon, kappa must lie in (0,1]");
  const double kk = static_cast<double>(k);
  v.require(make_check("k >= rdc/eps log(2/kappa)", kk, book["rdc"] / epsilon * std::log(2 / kappa), false));
  v.require(make_check("(1+eps/2)^2k (1+3eps/4)^-2k <= kappa/2",
                       std::pow((1 + epsilon / 2) / (1 + 0.75 * epsilon), 2 * kk), kappa / 2, true));
  v.require(make_check("mu(B2+B1+B0)/mu(B0)", ratio_of((b2 + b1 + b0).size(), b0.size()),
                       1 + epsilon * alpha * alpha / 4, true));
  v.require(make_check("mu_B0(A) = alpha", std::abs(relative_density(a, b0) - alpha), 1e-12, true, 0));
  const GroupSubset a0 = a.intersect(b0);
  const auto f = autocorrelation(a0);
  const double norm = lp_norm(f, fourfold_measure(b1, b2), 2 * kk);
  v.require(make_check("L_2k norm", norm, (1 + epsilon) * alpha * alpha * b0.density(), false));

  SiftOutput out{GroupSubset(g), GroupSubset(g), sift_target(a, b0, b1, b2, alpha, epsilon), 0, 0, {}, 0, 0, 0, 0, 0, {}};
  const double floor_density = std::pow(alpha, 4 * kk);
  const auto pts = b0.members();
  const auto b1m = b1.members(), b2m = b2.members();
  const GroupSubset na0 = a0.negate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  const int retries = book.count("retries"), batch = book.count("sift_batch");
  for (int r = 0; r < retries; ++r) {
    for (int b = 0; b < batch; ++b) {
      ++out.tuples_tried;
      std::vector<std::size_t> xs(2 * k);
      for (auto& x : xs) x = pts[pick(rng)];
      GroupSubset ap = GroupSubset::whole(g);
      for (auto x : xs) {
        ap = ap.intersect(na0.translate(x));
        if (ap.empty()) break;
      }
      if (ap.empty()) continue;
      for (auto z : b1m) {
        const GroupSubset t = ap.intersect(b2.translate(z));
        const double dt = ratio_of(t.size(), b2.size());
        if (t.empty() || dt < floor_density) continue;
        for (auto w : b2m) {
          const GroupSubset sp = ap.intersect(b1.translate(w));
          const double ds = ratio_of(sp.size(), b1.size());
          if (sp.empty() || ds < floor_density) continue;
          const GroupSubset s = sp.negate();
          const double corr = sift_correlation(out.d, t, s);
          if (corr < 1 - kappa) continue;
          out.t = t;
          out.s = s;
          out.z = z;
          out.w = w;
          out.x_samples = xs;
          out.density_t = dt;
          out.density_s = ds;
          out.correlation = corr;
          out.retries_used = static_cast<std::size_t>(r) + 1;
          v.details = {{"alpha4k", floor_density}, {"norm", norm}, {"D_size", out.d.size()}};
          // slack of the weakest of the three conclusions
          v.conclude(std::min({dt - floor_density, ds - floor_density, corr - (1 - kappa)}), 0.0);
          out.verdict = v;
          return out;
        }
      }
    }
  }
  throw ConstantsMismatch("sift: no (x, z, w) found in " + std::to_string(out.tuples_tried) + " tuples");
}

}  // namespace rado
