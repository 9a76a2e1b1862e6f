#pragma once

#include <algorithm>
#include <cmath>

#include "rado/constants.hpp"
#include "rado/lemmas/common.hpp"

namespace rado {

inline LemmaVerdict verify_specpos(const GroupSubset& a, const GroupSubset& b0, const GroupSubset& b1,
                                   const DensityWeight& mu, const GroupSubset& d, std::size_t k, double epsilon,
                                   double eta, const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "specpos";
  v.book_hash = book.hash();
  const auto& g = b0.group();
  if (k < 1) throw InputError("specpos: k must be at least 1");
  v.require(make_check("epsilon in (0,1]", epsilon, 1, true));
  v.require(make_check("epsilon > 0", epsilon, 0, false, 0));
  v.require(make_check("eta in (0,1]", eta, 1, true));
  v.require(make_check("eta > 0", eta, 0, false, 0));
  if (b0.empty() || b1.empty()) throw InputError("specpos: empty Bohr set");
  v.require(make_check("mu(B1+B0)/mu(B0)", growth_of(b0, b1), 1 + eta, true));
  const GroupSubset a0 = a.intersect(b0);
  const double alpha = relative_density(a, b0);
  v.require(make_check("alpha > 0", alpha, 0, false, 0));
  double fmin = 0;
  for (const auto& c : fourier_stieltjes(mu)) fmin = std::min(fmin, c.real());
  v.require(make_check("min Re mu^", fmin, -1e-9, false, 0));
  v.require(make_check("mu(G \\ (B1-B1))", mu.measure((b1 - b1).complement()), 0, true));
  const double delta = mu.measure(d);
  v.require(make_check("mu(D) > 0", delta, 0, false, 0));

  const double mb0 = b0.density();
  const double scale = alpha * alpha * mb0;
  const auto f = autocorrelation(a0);
  double pairing = 0;
  for (auto u : d.members()) pairing += mu[u] * f[u];
  v.require(make_check("deviation", std::abs(pairing - delta * scale), epsilon * delta * scale, false));

  // Side check: (1_A - alpha 1_B0) * (1_-A - alpha 1_-B0) has nonnegative transform.
  RealFunction h(g.order(), 0.0), hr(g.order(), 0.0);
  for (auto x : b0.members()) h[x] = (a0.contains(x) ? 1.0 : 0.0) - alpha;
  for (std::size_t x = 0; x < g.order(); ++x) hr[g.neg(x)] = h[x];
  const auto hf = dft(g, std::span<const double>(convolve(g, h, hr)));
  double side = 0;
  for (const auto& c : hf) side = std::min(side, c.real());
  if (side < -1e-9) throw LemmaViolation("specpos: g * g~ has a negative Fourier coefficient");

  const double lhs = lp_norm(f, mu, 2.0 * static_cast<double>(k));
  const double rhs =
      ((1 + epsilon) * std::pow(delta / 2, 1.0 / (2.0 * static_cast<double>(k))) - book["specpos"] * eta / alpha) *
      scale;
  v.details = {{"alpha", alpha}, {"delta", delta}, {"pairing", pairing}, {"fhat_min", side}, {"k", k}};
  v.conclude(lhs, rhs);
  return v;
}

}  // namespace rado
