#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "rado/constants.hpp"
#include "rado/error.hpp"
#include "rado/fourier.hpp"
#include "rado/group.hpp"
#include "rado/matrix_game.hpp"

namespace rado {

// |gamma_t(x) - 1| for the character x -> e(t x / p), evaluated as 2 sin(pi m / p)
// with m the distance of t x to 0 mod p.
inline double character_distance(std::int64_t p, std::int64_t t, std::int64_t x) {
  std::int64_t m = static_cast<std::int64_t>((static_cast<__int128>(mod(t, p)) * mod(x, p)) % p);
  m = std::min(m, p - m);
  return 2.0 * std::sin(std::numbers::pi * static_cast<double>(m) / static_cast<double>(p));
}

inline constexpr double kBohrSlack = 1e-12;

class BohrSet {
 public:
  BohrSet(const FiniteGroup& g, std::vector<std::int64_t> freqs, double width)
      : group_(g), freqs_(std::move(freqs)), width_(width), members_(g) {
    if (!g.is_cyclic()) throw InputError("Bohr sets are built in Z/pZ only");
    if (!(width > 0 && width <= 2)) throw InputError("Bohr width must lie in (0,2]");
    for (auto& t : freqs_) t = mod(t, g.modulus());
    const auto p = g.modulus();
    for (std::int64_t x = 0; x < p; ++x) {
      bool in = true;
      for (auto t : freqs_)
        if (character_distance(p, t, x) > width + kBohrSlack) {
          in = false;
          break;
        }
      if (in) members_.insert(static_cast<std::size_t>(x));
    }
  }

  const FiniteGroup& group() const { return group_; }
  const std::vector<std::int64_t>& frequencies() const { return freqs_; }
  std::size_t rank() const { return freqs_.size(); }
  double width() const { return width_; }
  const GroupSubset& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  double density() const { return members_.density(); }
  bool contains(std::size_t x) const { return members_.contains(x); }

  nlohmann::json to_json() const {
    return {{"group", group_.name()}, {"frequencies", freqs_}, {"width", width_}, {"size", size()}};
  }

 private:
  FiniteGroup group_;
  std::vector<std::int64_t> freqs_;
  double width_;
  GroupSubset members_;
};

inline BohrSet build_bohr(const FiniteGroup& g, const std::vector<std::int64_t>& freqs, double width) {
  return BohrSet(g, freqs, width);
}

// mu(B(G, 2w)) / mu(B(G, w)); checked against 100^d.
inline double growth_ratio(const FiniteGroup& g, const std::vector<std::int64_t>& freqs, double width,
                           const ConstantBook& book = {}) {
  if (!(width > 0 && width <= 1)) throw InputError("growth_ratio: width must lie in (0,1]");
  const double ratio = static_cast<double>(BohrSet(g, freqs, 2 * width).size()) /
                       static_cast<double>(BohrSet(g, freqs, width).size());
  if (ratio > std::pow(book["growth"], static_cast<double>(freqs.size())) * (1 + 1e-12))
    throw LemmaViolation("Bohr growth bound violated");
  return ratio;
}

// 100^{-d ceil(log2(2/width))}.
inline double bohr_size_lower_bound(std::size_t d, double width, double growth = 100.0) {
  const double steps = std::ceil(std::log2(2.0 / width) - 1e-12);
  return std::pow(growth, -static_cast<double>(d) * std::max(0.0, steps));
}

struct RegularPair {
  double delta_star = 0;
  double delta_prime = 0;
  double l = 1;
  double eta = 0;
  double measured_ratio = 0;
  std::size_t candidate = 0;  // grid index that verified
  std::size_t star_size = 0;
  std::size_t sum_size = 0;

  nlohmann::json to_json() const {
    return {{"delta_star", delta_star}, {"delta_prime", delta_prime}, {"l", l},
            {"eta", eta},               {"measured_ratio", measured_ratio}, {"candidate", candidate},
            {"star_size", star_size},   {"sum_size", sum_size}};
  }
};

// Scans delta_i = delta/2 + i l delta', delta' = delta/(2 l grid), and returns the
// first candidate whose sumset inequality and containment hold on direct computation.
// l may exceed |G| (the chain multiples do); the l-fold sumset of a set holding 0
// stops growing by then.
inline RegularPair find_regular_pair(const FiniteGroup& g, const std::vector<std::int64_t>& freqs, double width,
                                     double l, double eta, std::size_t grid) {
  if (!(width > 0 && width <= 2)) throw InputError("find_regular_pair: width must lie in (0,2]");
  if (!(eta > 0 && eta <= 1)) throw InputError("find_regular_pair: eta must lie in (0,1]");
  if (!(l >= 1) || std::floor(l) != l) throw InputError("find_regular_pair: l must be a natural number");
  if (grid < 1) throw BudgetError("find_regular_pair: empty candidate grid");
  const double dp = width / (2.0 * l * static_cast<double>(grid));
  const auto reps = static_cast<std::size_t>(std::min(l, static_cast<double>(g.order())));
  const GroupSubset small = BohrSet(g, freqs, dp).members().multiple(reps);
  for (std::size_t i = 0; i < grid; ++i) {
    const double ds = width / 2 + static_cast<double>(i) * l * dp;
    const BohrSet star(g, freqs, ds);
    if (!small.subset_of(star.members())) continue;
    const std::size_t sum = (star.members() + small).size();
    const double ratio = static_cast<double>(sum) / static_cast<double>(star.size());
    if (ratio <= 1 + eta) return {ds, dp, l, eta, ratio, i, star.size(), sum};
  }
  throw BudgetError("find_regular_pair: no candidate in a grid of " + std::to_string(grid) + " verified");
}

// max_{x in B1 - B1} |1 - gamma(x)|, checked against 2 eta / kappa.
inline double character_rigidity(const GroupSubset& b0, const GroupSubset& b1, std::size_t gamma, double eta,
                                 double kappa) {
  const auto& g = b0.group();
  if (b0.empty() || b1.empty()) throw InputError("character_rigidity: empty set");
  if (!(eta > 0 && eta <= 1) || !(kappa > 0 && kappa <= 1))
    throw InputError("character_rigidity: eta and kappa must lie in (0,1]");
  const double growth = static_cast<double>((b1 + b0).size()) / static_cast<double>(b0.size());
  if (growth > 1 + eta + 1e-12) throw HypothesisFail("rigidity", "mu(B1+B0) <= (1+eta) mu(B0)", growth, 1 + eta);
  cplx coeff = 0;
  for (auto x : b0.members()) coeff += std::conj(g.character(gamma, x));
  const double mag = std::abs(coeff) / static_cast<double>(b0.size());
  if (mag < kappa - 1e-12) throw HypothesisFail("rigidity", "|mu_B0^(gamma)| >= kappa", mag, kappa);
  double worst = 0;
  for (auto x : (b1 - b1).members()) worst = std::max(worst, std::abs(1.0 - g.character(gamma, x)));
  if (worst > 2 * eta / kappa + 1e-9) throw LemmaViolation("character rigidity bound violated");
  return worst;
}

// ||1_A * mu_B||_inf = max_x |A cap (x - B)| / |B|, with the smallest maximiser.
inline std::pair<double, std::size_t> sup_density(const GroupSubset& a, const GroupSubset& b) {
  const auto& g = a.group();
  const auto conv = convolve_counts(g, a, b);
  std::size_t best = 0;
  for (std::size_t x = 1; x < conv.size(); ++x)
    if (conv[x] > conv[best]) best = x;
  return {static_cast<double>(conv[best]) / static_cast<double>(b.size()), best};
}

inline LemmaVerdict hereditary_density_check(const GroupSubset& a, const GroupSubset& b0, const GroupSubset& b1,
                                             double eta, const ConstantBook& book = {}) {
  LemmaVerdict v;
  v.lemma = "hereditary";
  v.book_hash = book.hash();
  if (!(eta > 0 && eta <= 1)) throw InputError("hereditary_density_check: eta must lie in (0,1]");
  const double growth = static_cast<double>((b0 + b1).size()) / static_cast<double>(b0.size());
  v.require(make_check("mu(B0+B1)/mu(B0)", growth, 1 + eta, true));
  const double alpha = sup_density(a, b0).first;
  const auto game = game_density(a, b1 - b1);
  v.details = {{"alpha", alpha}, {"game_exact", game.exact}, {"gap", game.gap}};
  v.conclude(game.lower, alpha - 2 * eta);
  return v;
}

}  // namespace rado
