#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "rado/lemmas/propd.hpp"
#include "rado/lemmas/sift.hpp"
#include "rado/lemmas/specpos.hpp"

namespace rado {

struct IterationOutcome {
  enum class Kind { ManySolutions, Increment };
  Kind kind = Kind::ManySolutions;
  double correlation = 0;  // <1_A * 1_-A, 1_D>_{L2(mu)}
  double threshold = 0;    // delta alpha^2 mu(B0) / 2
  std::optional<BohrSet> b6;
  double measured_density = 0;  // game value of A cap B0 over B6 cap (B5 - B5)
  std::optional<LemmaVerdict> specpos;
  std::optional<SiftOutput> sifted;
  std::optional<PropDResult> propd;
  LemmaVerdict verdict;

  bool many_solutions() const { return kind == Kind::ManySolutions; }

  nlohmann::json to_json() const {
    nlohmann::json j{{"kind", many_solutions() ? "many_solutions" : "increment"},
                     {"correlation", correlation},
                     {"threshold", threshold},
                     {"verdict", verdict.to_json()}};
    if (b6) j["B6"] = b6->to_json();
    if (!many_solutions()) j["measured_density"] = measured_density;
    if (specpos) j["specpos"] = specpos->to_json();
    if (sifted) j["sift"] = sifted->to_json();
    if (propd) j["propd"] = propd->to_json();
    return j;
  }
};

inline IterationOutcome iteration_step(const GroupSubset& a, const GroupSubset& d, const GroupSubset& b0,
                                       const GroupSubset& b1, const GroupSubset& b2, const GroupSubset& b3,
                                       const GroupSubset& b4, const GroupSubset& b5, std::size_t k, std::size_t l,
                                       double m, double alpha, double delta, std::uint64_t seed,
                                       const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "itstep";
  v.seed = seed;
  v.book_hash = book.hash();
  for (const auto* b : {&b0, &b1, &b2, &b3, &b4, &b5})
    if (b->empty()) throw InputError("iteration_step: empty chain set");
  if (!(alpha > 0 && alpha <= 1) || !(delta > 0 && delta <= 1))
    throw InputError("iteration_step: alpha and delta must lie in (0,1]");
  if (k < 1 || l < 1) throw InputError("iteration_step: k, l must be positive");
  require_natural(m, "iteration_step: m");

  const double kk = static_cast<double>(k), ll = static_cast<double>(l), mm = m;
  const double la = std::log(2 / alpha);
  const double a4k = std::pow(alpha, 4 * kk);
  v.require(make_check("k >= spec log(2/delta)", kk, book.spec() * std::log(2 / delta), false));
  v.require(make_check("l >= spec3 k log(2/alpha)", ll, book.spec3() * kk * la, false));
  v.require(make_check("m >= spec2 l^2 k^2 log^2(2/alpha)", mm, book.spec2() * ll * ll * kk * kk * la * la, false));
  const GroupSubset nb12 = (b1 + b2).negate();
  const GroupSubset lb3 = (b3 - b3).multiple(l);
  v.require(make_check("mu(-B1-B2+B0)/mu(B0)", growth_of(b0, nb12), 1 + book.c_me() * alpha, true));
  v.require(make_check("mu(B2+B1+B0)/mu(B0)", ratio_of((b2 + b1 + b0).size(), b0.size()),
                       1 + book["c16"] * alpha * alpha, true));
  v.require(make_check("mu(B1-B2+l(B3-B3))/mu(B1)", ratio_of((b1 - b2 + lb3).size(), b1.size()), 2, true));
  v.require(make_check("mu(B1+B3)/mu(B1)", growth_of(b1, b3), 2, true));
  v.require(make_check("mu(B2+l(B3-B3))/mu(B2)", growth_of(b2, lb3), 2, true));
  v.require(make_check("mu(B3+mB4)/mu(B3)", growth_of(b3, multiple_of(b4, m)), 2, true));
  v.require(make_check("mu(B5+B4)/mu(B4)", growth_of(b4, b5), 1 + book.c96() * a4k, true));
  v.require(make_check("mu_B0(A) = alpha", std::abs(relative_density(a, b0) - alpha), 1e-12, true, 0));
  const DensityWeight mu = fourfold_measure(b1, b2);
  v.require(make_check("mu(D)", mu.measure(d), delta, false));

  IterationOutcome out;
  const auto f = autocorrelation(a);
  for (auto u : d.members()) out.correlation += mu[u] * f[u];
  out.threshold = 0.5 * delta * alpha * alpha * b0.density();
  if (out.correlation >= out.threshold) {
    out.kind = IterationOutcome::Kind::ManySolutions;
    v.details = {{"branch", "many_solutions"}};
    v.conclude(out.correlation, out.threshold, true, 0);
    out.verdict = v;
    return out;
  }

  out.kind = IterationOutcome::Kind::Increment;
  out.specpos = verify_specpos(a, b0, nb12, mu, d, k, 0.5, book.c_me() * alpha, book);
  if (!out.specpos->pass) throw ConstantsMismatch("itstep: spectral positivity bound failed");
  out.sifted = sift(a, b0, b1, b2, k, alpha, book["itstep_sift_eps"], book["itstep_sift_kappa"], seed, book);
  const auto& sf = *out.sifted;
  const auto& g = b0.group();
  out.propd = prop_d_pipeline(sf.s, sf.t, sf.d, b1.translate(sf.w), b2.translate(sf.z), b3, b4, b5,
                              book["itstep_prop_eps"], a4k, a4k, l, m, seed ^ 0x9e3779b97f4a7c15ULL, book);
  if (!out.propd->verdict.pass) throw ConstantsMismatch("itstep: proposition bound failed");
  out.b6 = out.propd->b5;
  const GroupSubset region = out.b6->members().intersect(b5 - b5);
  const auto gv = game_density(a.intersect(b0), region);
  out.measured_density = gv.lower;
  v.details = {{"branch", "increment"},
               {"region_size", region.size()},
               {"game_upper", gv.upper},
               {"rank", out.b6->rank()},
               {"width", out.b6->width()},
               {"group", g.name()}};
  v.conclude(out.measured_density, (1 + book["c32"]) * alpha);
  out.verdict = v;
  return out;
}

}  // namespace rado
