#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rado/bohr.hpp"
#include "rado/constants.hpp"
#include "rado/lemmas/common.hpp"

namespace rado {

// p_omega = prod (1 + Re omega(lambda) lambda).
inline RealFunction riesz_product(const FiniteGroup& g, const std::vector<std::size_t>& lambda,
                                  const std::vector<cplx>& omega) {
  if (omega.size() != lambda.size()) throw InputError("riesz_product: omega size mismatch");
  for (const auto& w : omega)
    if (std::abs(w) > 1 + 1e-12) throw InputError("riesz_product: |omega| > 1");
  RealFunction p(g.order(), 1.0);
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t i = 0; i < lambda.size(); ++i) p[x] *= 1 + (omega[i] * g.character(lambda[i], x)).real();
  return p;
}

// Is there a nonzero sigma in {-1,0,1}^n with sum sigma_i lambda_i trivial?
// Meet in the middle over the two halves.
inline bool classically_dissociated(const FiniteGroup& g, const std::vector<std::size_t>& lambda) {
  if (lambda.size() > 20) throw InputError("dissociation test: more than 20 characters");
  const std::size_t h = lambda.size() / 2;
  auto sums = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::pair<std::size_t, bool>> out{{0, false}};  // (sum, sigma nonzero)
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t n = out.size();
      for (std::size_t j = 0; j < n; ++j) {
        out.push_back({g.add(out[j].first, lambda[i]), true});
        out.push_back({g.sub(out[j].first, lambda[i]), true});
      }
    }
    return out;
  };
  const auto left = sums(0, h), right = sums(h, lambda.size());
  std::unordered_map<std::size_t, int> seen;  // bit 0: zero sigma reaches it, bit 1: nonzero sigma
  for (const auto& [s, nz] : left) seen[s] |= nz ? 2 : 1;
  for (const auto& [s, nz] : right) {
    auto it = seen.find(g.neg(s));
    if (it == seen.end()) continue;
    if (nz || (it->second & 2)) return false;
  }
  return true;
}

struct DissociationResult {
  bool classical = false;
  double riesz_lower_bound = 0;  // attained by `omega`
  std::vector<cplx> omega;
};

// Coordinate ascent: for fixed other coordinates the integral is c + Re(w v),
// maximised at w = conj(v)/|v|. Several starts; the best value is a lower bound
// on sup over omega of the Riesz integral.
inline double riesz_ascent(const FiniteGroup& g, const std::vector<std::size_t>& lambda, const DensityWeight& mu,
                           int sweeps, std::vector<cplx>* best_omega = nullptr) {
  const std::size_t n = lambda.size();
  std::vector<std::size_t> pts;
  for (std::size_t x = 0; x < g.order(); ++x)
    if (mu[x] > 0) pts.push_back(x);
  std::vector<std::vector<cplx>> chi(n, std::vector<cplx>(pts.size()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) chi[i][j] = g.character(lambda[i], pts[j]);
  auto integral = [&](const std::vector<cplx>& om) {
    double s = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double prod = mu[pts[j]];
      for (std::size_t i = 0; i < n; ++i) prod *= 1 + (om[i] * chi[i][j]).real();
      s += prod;
    }
    return s;
  };
  double best = integral(std::vector<cplx>(n, 0.0));
  if (best_omega) best_omega->assign(n, 0.0);
  const std::vector<std::vector<cplx>> starts = {std::vector<cplx>(n, 0.0), std::vector<cplx>(n, 1.0),
                                                 std::vector<cplx>(n, -1.0)};
  for (auto om : starts) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i) {
        cplx v = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
          double rest = mu[pts[j]];
          for (std::size_t q = 0; q < n; ++q)
            if (q != i) rest *= 1 + (om[q] * chi[q][j]).real();
          v += rest * chi[i][j];
        }
        const cplx next = std::abs(v) > 0 ? std::conj(v) / std::abs(v) : cplx(0);
        if (std::abs(next - om[i]) > 1e-12) moved = true;
        om[i] = next;
      }
      if (!moved) break;
    }
    const double val = integral(om);
    if (val > best) {
      best = val;
      if (best_omega) *best_omega = om;
    }
  }
  return best;
}

inline DissociationResult dissociation_test(const std::vector<std::size_t>& lambda, const DensityWeight& mu,
                                            int ascent_iters) {
  DissociationResult r;
  r.classical = classically_dissociated(mu.group(), lambda);
  r.riesz_lower_bound = riesz_ascent(mu.group(), lambda, mu, ascent_iters, &r.omega);
  return r;
}

struct LocalChangResult {
  BohrSet b3;
  std::vector<std::size_t> lambda;
  std::vector<std::size_t> spectrum;
  LemmaVerdict verdict;
};

inline LocalChangResult local_chang(const GroupSubset& a, const GroupSubset& b0, const GroupSubset& b1,
                                    const GroupSubset& b2, double epsilon, double delta, double k,
                                    const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "chang";
  v.book_hash = book.hash();
  const auto& g = b0.group();
  if (!g.is_cyclic()) throw InputError("local_chang: Z/pZ only");
  if (b0.empty() || b1.empty() || b2.empty()) throw InputError("local_chang: empty Bohr set");
  if (!(epsilon > 0 && epsilon <= 1) || !(delta > 0 && delta <= 1))
    throw InputError("local_chang: epsilon and delta must lie in (0,1]");
  require_natural(k, "local_chang: k");
  const double alpha = relative_density(a, b0);
  v.require(make_check("alpha > 0", alpha, 0, false, 0));
  const double kk = k;
  v.require(make_check("k >= llc eps^-2 log(2/alpha)", kk,
                       book["llc"] / (epsilon * epsilon) * std::log(2 / alpha), false));
  const GroupSubset kb1 = multiple_of(b1, k);
  v.require(make_check("mu(B0+kB1)/mu(B0)", growth_of(b0, kb1), 2, true));
  const double eta = std::max(growth_of(b1, b2) - 1, 1e-12);
  v.require(make_check("eta = mu(B2+B1)/mu(B1) - 1", eta, 1, true));

  const GroupSubset a0 = a.intersect(b0);
  const auto delta_set = large_spectrum(a0, b0, epsilon);
  // mu_{B0+kB1} * mu_{-B1}^{*k}
  DensityWeight mu = DensityWeight::uniform_on(b0 + kb1);
  if (b1.size() > 1 && k > 0x1p62) {
    mu = DensityWeight::uniform_on(GroupSubset::whole(g));  // the k-fold power has mixed to double precision
  } else if (b1.size() > 1) {
    DensityWeight sq = DensityWeight::uniform_on(b1.negate());
    for (auto e = static_cast<std::uint64_t>(k); e > 0; e >>= 1) {
      if (e & 1) mu = mu.convolve(sq);
      if (e > 1) sq = sq.convolve(sq);
    }
  }

  const int sweeps = book.count("ascent_iters");
  std::vector<std::size_t> lam;
  std::size_t tests = 0;
  while (true) {
    bool grew = false;
    for (auto gamma : delta_set) {
      if (std::find(lam.begin(), lam.end(), gamma) != lam.end()) continue;
      auto trial = lam;
      trial.push_back(gamma);
      ++tests;
      const double bound = std::exp(static_cast<double>(lam.size() + 1) / (kk + 1));
      if (riesz_ascent(g, trial, mu, sweeps) <= bound) {
        lam = std::move(trial);
        grew = true;
        break;
      }
    }
    if (!grew) break;
    if (static_cast<double>(lam.size()) > kk) throw ConstantsMismatch("local_chang: greedy produced more than k characters");
  }

  std::vector<std::int64_t> freqs(lam.begin(), lam.end());
  BohrSet b3(g, freqs, delta);
  const GroupSubset region = (b2 - b2).intersect(b3.members());
  double worst = 0;
  for (auto gamma : delta_set)
    for (auto x : region.members()) worst = std::max(worst, std::abs(1.0 - g.character(gamma, x)));
  v.details = {{"alpha", alpha},       {"eta", eta},          {"spectrum_size", delta_set.size()},
               {"lambda", lam},        {"greedy_tests", tests}, {"region_size", region.size()}};
  v.conclude(worst, book["c12"] * eta + kk * delta, false);
  return {std::move(b3), lam, delta_set, v};
}

}  // namespace rado
