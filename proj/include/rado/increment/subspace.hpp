#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rado/bohr.hpp"
#include "rado/constants.hpp"
#include "rado/fourier.hpp"
#include "rado/group.hpp"

namespace rado {

// V = {x : <u, x> = 0 for u in U} inside F_q^n, U kept linearly independent.
class Subspace {
 public:
  static Subspace whole(const FiniteGroup& g) {
    if (g.is_cyclic()) throw InputError("Subspace: F_q^n only");
    return Subspace({}, GroupSubset::whole(g));
  }

  const FiniteGroup& group() const { return members_.group(); }
  const GroupSubset& members() const { return members_; }
  const std::vector<std::size_t>& annihilator() const { return ann_; }
  std::size_t codim() const { return ann_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(group().dim()) - codim(); }
  std::size_t size() const { return members_.size(); }

  bool trivial_on(std::size_t u) const {
    for (auto x : members_.members())
      if (group().pairing(u, x) != 0) return false;
    return true;
  }

  // V cap ker(u); unchanged when u already vanishes on V.
  Subspace refine(std::size_t u) const {
    if (trivial_on(u)) return *this;
    const auto& g = group();
    GroupSubset next(g);
    for (auto x : members_.members())
      if (g.pairing(u, x) == 0) next.insert(x);
    auto ann = ann_;
    ann.push_back(u);
    return Subspace(std::move(ann), std::move(next));
  }

  // Kernel basis of the annihilator rows, by row reduction mod q.
  std::vector<std::size_t> basis() const {
    const auto& g = group();
    const std::int64_t q = g.modulus();
    const auto n = static_cast<std::size_t>(g.dim());
    std::vector<std::vector<std::int64_t>> rows;
    for (auto u : ann_) rows.push_back(g.digits(u));
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
      std::size_t piv = r;
      while (piv < rows.size() && rows[piv][c] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[r], rows[piv]);
      const std::int64_t inv = g.inverse(rows[r][c]);
      for (auto& v : rows[r]) v = mod(v * inv, q);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k == r || rows[k][c] == 0) continue;
        const std::int64_t f = rows[k][c];
        for (std::size_t t = 0; t < n; ++t) rows[k][t] = mod(rows[k][t] - f * rows[r][t], q);
      }
      pivots.push_back(c);
      ++r;
    }
    std::vector<std::size_t> out;
    for (std::size_t free = 0; free < n; ++free) {
      if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
      std::vector<std::int64_t> v(n, 0);
      v[free] = 1;
      for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = mod(-rows[k][free], q);
      out.push_back(g.from_digits(v));
    }
    return out;
  }

  // ||1_A * mu_V||_inf and the smallest coset representative attaining it.
  std::pair<double, std::size_t> best_coset(const GroupSubset& a) const { return sup_density(a, members_); }

  nlohmann::json to_json() const {
    return {{"codim", codim()}, {"dim", dim()}, {"annihilator", ann_}, {"basis", basis()}};
  }

 private:
  Subspace(std::vector<std::size_t> ann, GroupSubset members)
      : ann_(std::move(ann)), members_(std::move(members)) {}

  std::vector<std::size_t> ann_;
  GroupSubset members_;
};

struct SpectralIncrement {
  Subspace v;
  double density = 0;
  std::size_t coset = 0;
  std::vector<std::size_t> characters;  // kernels intersected, in order

  nlohmann::json to_json() const {
    return {{"subspace", v.to_json()}, {"density", density}, {"coset", coset}, {"characters", characters}};
  }
};

// Greedy kernel intersection: among the `candidates` characters with the largest
// |(1_{A cap V})^|, refine V by the one whose kernel gives the densest coset; stop at
// the first V' with ||1_A * mu_V'||_inf >= (1 + c32) mu_V(A), or after `budget` kernels.
inline std::optional<SpectralIncrement> spectral_increment(const GroupSubset& a, const Subspace& v, std::size_t budget,
                                                           const ConstantBook& book = {},
                                                           std::size_t candidates = 64) {
  const auto& g = v.group();
  if (!(a.group() == g)) throw InputError("spectral_increment: group mismatch");
  const GroupSubset av = a.intersect(v.members());
  const double alpha = static_cast<double>(av.size()) / static_cast<double>(v.size());
  if (av.empty() || av.size() == v.size()) return std::nullopt;
  const double target = (1 + book["c32"]) * alpha;

  const auto spec = dft(g, av.indicator());
  std::vector<std::size_t> order(g.order());
  for (std::size_t u = 0; u < order.size(); ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(spec[x]) > std::abs(spec[y]) + 1e-12; });

  SpectralIncrement cur{v, alpha, 0, {}};
  for (std::size_t level = 0; level < budget; ++level) {
    std::optional<SpectralIncrement> best;
    std::size_t seen = 0;
    for (auto u : order) {
      if (seen == candidates) break;
      if (cur.v.trivial_on(u)) continue;
      ++seen;
      Subspace next = cur.v.refine(u);
      const auto [dens, coset] = next.best_coset(av);
      if (!best || dens > best->density + 1e-12) {
        auto chars = cur.characters;
        chars.push_back(u);
        best = SpectralIncrement{std::move(next), dens, coset, std::move(chars)};
      }
    }
    if (!best) return std::nullopt;  // V' already trivial
    cur = std::move(*best);
    // Re-verify by counting A on the chosen coset directly.
    std::size_t hits = 0;
    for (auto x : cur.v.members().members())
      if (av.contains(g.add(cur.coset, x))) ++hits;
    const double counted = static_cast<double>(hits) / static_cast<double>(cur.v.size());
    if (std::abs(counted - cur.density) > 1e-12) throw LemmaViolation("spectral_increment: coset recount disagrees");
    if (counted >= target - 1e-12) return cur;
  }
  return std::nullopt;
}

}  // namespace rado
