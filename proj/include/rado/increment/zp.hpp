#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "rado/bohr.hpp"
#include "rado/colouring.hpp"
#include "rado/constants.hpp"
#include "rado/fourier.hpp"
#include "rado/increment/trace.hpp"
#include "rado/lemmas/itstep.hpp"
#include "rado/matrix_game.hpp"

namespace rado {

struct EmbeddedInterval {
  FiniteGroup group;
  BohrSet b0;
};

// p = least prime > (2|a| + |b|) N, and B({1}, 2 sin(pi N / p)) = {-N..N} mod p.
inline EmbeddedInterval embed_interval(std::int64_t n, std::int64_t a, std::int64_t b) {
  if (n < 1) throw InputError("embed_interval: N must be at least 1");
  if (a == 0 || b == 0) throw InputError("embed_interval: a and b must be nonzero");
  const std::int64_t base = checked::mul(checked::add(checked::mul(2, std::llabs(a)), std::llabs(b)), n);
  std::int64_t p = base + 1;
  while (!is_prime(p)) {
    if (++p > 2 * base) throw ContractError("embed_interval: no prime below 2(2|a|+|b|)N");
  }
  const FiniteGroup g = FiniteGroup::cyclic(p);
  const double width = 2 * std::sin(std::numbers::pi * static_cast<double>(n) / static_cast<double>(p));
  BohrSet b0(g, {1}, width);
  if (b0.size() != static_cast<std::size_t>(2 * n + 1)) throw LemmaViolation("embed_interval: Bohr set is not the interval");
  for (std::int64_t z = -n; z <= n; ++z)
    if (!b0.contains(g.from_int(z))) throw LemmaViolation("embed_interval: Bohr set is not the interval");
  return {g, std::move(b0)};
}

// Pairs (x, y) in A^2 with b^{-1} a (x - y) in A: the O(p^2) count.
inline std::uint64_t pair_loop_count(const GroupSubset& set, std::int64_t a, std::int64_t b) {
  const auto& g = set.group();
  const std::int64_t c = mod(a, g.modulus()) * g.inverse(b) % g.modulus();
  const auto m = set.members();
  std::uint64_t n = 0;
  for (auto x : m)
    for (auto y : m)
      if (set.contains(g.scale(c, g.sub(x, y)))) ++n;
  return n;
}

struct ZpConfig {
  std::size_t grid = 64;       // regular-pair candidates per call
  std::size_t max_steps = 0;   // 0 means r (gain_bound + 2)
  std::uint64_t seed = 0;
  ConstantBook book;
};

namespace detail {

inline std::vector<std::int64_t> scale_freqs(std::vector<std::int64_t> f, std::int64_t c, std::int64_t p) {
  for (auto& t : f) t = mod(t, p) * mod(c, p) % p;
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

// Below double range the Bohr set is {0} either way; keep the width positive.
inline double floor_width(double w) { return std::max(w, std::numeric_limits<double>::min()); }

struct Chain {
  std::vector<RegularPair> pairs;
  std::vector<BohrSet> b;  // B0..B5
};

inline Chain build_chain(const FiniteGroup& g, const std::vector<std::int64_t>& gamma, double width, std::int64_t a,
                         std::int64_t b, std::size_t r, double l, double m, double k, std::size_t grid,
                         const ConstantBook& book) {
  const std::int64_t p = g.modulus();
  const double rr = static_cast<double>(r);
  const double ab = static_cast<double>(std::llabs(a) * std::llabs(b));
  const auto gb = scale_freqs(gamma, g.inverse(b), p);
  Chain c;
  auto pair = [&](const std::vector<std::int64_t>& f, double w, double mult, double eta) {
    c.pairs.push_back(find_regular_pair(g, f, floor_width(w), mult, std::max(eta, std::numeric_limits<double>::min()), grid));
    return c.pairs.back();
  };
  const auto p0 = pair(gamma, width, 4 * ab, std::min(book.c_me() / (2 * rr), book["c16"] / (4 * rr * rr)));
  c.b.emplace_back(g, gamma, p0.delta_star);
  const BohrSet b1p(g, gamma, p0.delta_prime);
  const BohrSet b1pp(g, gb, p0.delta_prime);
  if (!(b1pp.members() == b1p.members().dilate(b))) throw LemmaViolation("zp chain: B1'' differs from b.B1'");
  const auto p1 = pair(gb, p0.delta_prime, 2 * (l + 1), 1 / (4 * rr));
  c.b.emplace_back(g, gb, p1.delta_star);
  const auto p2 = pair(gb, p1.delta_prime, 2 * l, 1);
  c.b.emplace_back(g, gb, p2.delta_star);
  const auto p3 = pair(gb, p2.delta_prime, m, 1);
  c.b.emplace_back(g, gb, p3.delta_star);
  const auto p4 = pair(gb, p3.delta_prime, 1, book.c96() * std::pow(2 * rr, -4 * k));
  c.b.emplace_back(g, gb, p4.delta_star);
  c.b.emplace_back(g, gb, p4.delta_prime);
  return c;
}

}  // namespace detail

inline TraceRecord zp_iterate(const IntervalColouring& colouring, std::int64_t a, std::int64_t b,
                              const ZpConfig& cfg = {}) {
  if (!colouring.is_signed()) throw InputError("zp_iterate: colour {-N..N}");
  const auto emb = embed_interval(colouring.n(), a, b);
  const FiniteGroup& g = emb.group;
  const std::int64_t p = g.modulus();
  const ConstantBook& book = cfg.book;

  std::vector<GroupSubset> classes, ac, bc;
  std::vector<std::size_t> sizes;
  for (const auto& cls : colouring.classes()) {
    GroupSubset s(g);
    for (auto z : cls) s.insert(g.from_int(z));
    ac.push_back(s.dilate(a));
    bc.push_back(s.dilate(b));
    sizes.push_back(s.size());
    classes.push_back(std::move(s));
  }
  const std::size_t r = classes.size();
  const double rr = static_cast<double>(r), l4r = std::log(4 * rr);
  const double k = std::ceil(book.spec() * l4r);
  const double l = std::ceil(book.spec3() * k * l4r);
  const double m = std::ceil(book.spec2() * l * l * k * k * l4r * l4r);
  const double c32 = book["c32"];
  const std::size_t bound = gain_bound(r, c32);
  const std::size_t max_steps = cfg.max_steps ? cfg.max_steps : r * (bound + 2);

  TraceRecord rec;
  rec.tracer = "zp";
  rec.setup = {{"N", colouring.n()}, {"a", a},       {"b", b},     {"p", p},
               {"r", r},             {"k", k},       {"l", l},     {"m", m},
               {"class_sizes", sizes}, {"gain_bound", bound}, {"grid", cfg.grid},
               {"seed", cfg.seed},   {"book", book.hash()}};

  std::vector<std::int64_t> gamma = emb.b0.frequencies();
  double delta = emb.b0.width();
  GroupSubset current = emb.b0.members();
  std::vector<double> prev;
  std::vector<std::size_t> gains(r, 0);
  std::optional<std::size_t> grew;
  std::optional<std::size_t> lifted;  // class promised S >= 1/2r by a cd0 step

  auto flag = [&](const std::string& kind, const std::string& why, nlohmann::json dump) {
    rec.outcome.flagged = true;
    rec.outcome.kind = kind;
    rec.outcome.reason = why;
    rec.outcome.dump = std::move(dump);
    return rec;
  };

  for (std::size_t i = 0; i < max_steps; ++i) {
    StepRecord st;
    st.step = i;
    st.d = gamma.size();
    st.delta = delta;
    for (std::size_t j = 0; j < r; ++j) {
      const double s = ac[j].empty() ? 0.0 : game_density(ac[j], current).value;
      if (s > 1 + 1e-9) throw LemmaViolation("zp_iterate: S exceeds 1");
      if (!prev.empty() && s < prev[j] - 1e-7) throw LemmaViolation("zp_iterate: S decreased");
      st.s_row.push_back(s);
    }
    nlohmann::json state{{"frequencies", gamma}, {"bohr_size", current.size()}};
    if (grew) {
      const bool met = st.s_row[*grew] >= (1 + c32) * prev[*grew] - 1e-7;
      state["previous_gain_met"] = met;
      if (met && ++gains[*grew] > bound) throw LemmaViolation("zp_iterate: gain count above the log bound");
    }
    if (lifted) state["previous_lift_met"] = st.s_row[*lifted] >= 1 / (2 * rr) - 1e-7;
    grew.reset();
    lifted.reset();
    state["gains"] = gains;
    auto dump = [&] {
      nlohmann::json d = state;
      d["step"] = i;
      d["delta"] = delta;
      d["S"] = st.s_row;
      return d;
    };

    detail::Chain chain;
    try {
      chain = detail::build_chain(g, gamma, delta, a, b, r, l, m, k, cfg.grid, book);
    } catch (const BudgetError& e) {
      rec.steps.push_back(st);
      rec.steps.back().kase = "chain";
      rec.steps.back().state = state;
      return flag("chain_budget", e.what(), dump());
    }
    nlohmann::json pairs = nlohmann::json::array(), chain_sizes = nlohmann::json::array();
    for (const auto& pr : chain.pairs) pairs.push_back(pr.to_json());
    for (const auto& bs : chain.b) chain_sizes.push_back(bs.size());
    state["pairs"] = pairs;
    state["chain_sizes"] = chain_sizes;
    const auto& B = chain.b;
    if (!B[0].members().subset_of(current)) throw LemmaViolation("zp_iterate: B0 escapes the current Bohr set");

    const DensityWeight mu = fourfold_measure(B[1].members(), B[2].members());
    if (!mu.support().subset_of(B[0].members().dilate(b)))
      throw LemmaViolation("zp_iterate: four-fold measure escapes b.B0");
    std::vector<double> mub(r);
    std::size_t j = 0;
    for (std::size_t c = 0; c < r; ++c) {
      mub[c] = mu.measure(bc[c]);
      if (mub[c] > mub[j] + 1e-12) j = c;
    }
    if (mub[j] < 1 / rr - 1e-9) throw LemmaViolation("zp_iterate: no class of measure 1/r");
    st.j = j;
    state["mu_bA"] = mub;

    const std::int64_t ratio = mod(a, p) * g.inverse(b) % p;
    if (st.s_row[j] < 1 / (2 * rr)) {
      // cd0: pass to ab^{-1}.B2, a Bohr set on frequencies Gamma a^{-1}.
      st.kase = "cd0";
      const auto next_gamma = detail::scale_freqs(gamma, g.inverse(a), p);
      const double next_delta = chain.pairs[2].delta_star;
      const BohrSet next(g, next_gamma, next_delta);
      if (!(next.members() == B[2].members().dilate(ratio))) throw LemmaViolation("zp_iterate: B(Gamma', w) != ab^-1.B2");
      if (!next.members().subset_of(current)) throw LemmaViolation("zp_iterate: Bohr sets not nested");
      const auto her = hereditary_density_check(ac[j], B[1].members().dilate(ratio), B[2].members().dilate(ratio),
                                                1 / (4 * rr), book);
      state["hereditary"] = her.to_json();
      st.state = state;
      rec.steps.push_back(st);
      gamma = next_gamma;
      delta = next_delta;
      current = next.members();
      prev = st.s_row;
      lifted = j;
      continue;
    }

    const auto [alpha, xi] = sup_density(ac[j], B[0].members());
    const GroupSubset target = ac[j].negate().translate(xi);
    state["x"] = xi;
    state["alpha"] = alpha;
    state["delta_measure"] = mub[j];
    IterationOutcome out;
    try {
      out = iteration_step(target, bc[j], B[0].members(), B[1].members(), B[2].members(), B[3].members(),
                           B[4].members(), B[5].members(), static_cast<std::size_t>(k), static_cast<std::size_t>(l),
                           m, relative_density(target, B[0].members()), mub[j], cfg.seed + i, book);
    } catch (const HypothesisFail& e) {
      rec.steps.push_back(st);
      rec.steps.back().kase = "itstep";
      rec.steps.back().state = state;
      return flag("hypothesis", e.what(), dump());
    } catch (const ConstantsMismatch& e) {
      rec.steps.push_back(st);
      rec.steps.back().kase = "itstep";
      rec.steps.back().state = state;
      return flag("constants", e.what(), dump());
    } catch (const BudgetError& e) {
      rec.steps.push_back(st);
      rec.steps.back().kase = "itstep";
      rec.steps.back().state = state;
      return flag("constants", e.what(), dump());
    } catch (const InputError& e) {  // alpha^{4k} below double range
      rec.steps.push_back(st);
      rec.steps.back().kase = "itstep";
      rec.steps.back().state = state;
      return flag("constants", e.what(), dump());
    }
    state["itstep"] = out.to_json();

    if (out.many_solutions()) {
      // cd1: the count in Z/p clears p^2 mu(B1)^2 mu(B2)^2 mu(B0) / 8r^3.
      st.kase = "cd1";
      const double pp = static_cast<double>(p);
      const double threshold = pp * pp * std::pow(B[1].density(), 2) * std::pow(B[2].density(), 2) * B[0].density() /
                               (8 * rr * rr * rr);
      const std::uint64_t count = count_triples(classes[j], a, b);
      state["count"] = count;
      state["threshold"] = threshold;
      st.state = state;
      rec.steps.push_back(st);
      if (static_cast<double>(count) < threshold * (1 - 1e-12))
        throw LemmaViolation("zp_iterate: many-solutions count below its bound");
      const std::uint64_t oracle = pair_loop_count(classes[j], a, b);
      if (oracle != count) throw LemmaViolation("zp_iterate: Fourier count disagrees with enumeration");
      rec.outcome = {false, "terminated", "", j, count, oracle, threshold, {}};
      return rec;
    }

    // cd2: add the frequencies of B6 and shrink the width.
    st.kase = "cd2";
    auto next_gamma = gamma;
    for (auto t : out.b6->frequencies()) next_gamma.push_back(t);
    next_gamma = detail::scale_freqs(next_gamma, 1, p);
    const double log_w = std::log(book.c128()) - 4 * k * std::log(2 * rr) - std::log(m);
    const double next_delta = detail::floor_width(std::min(chain.pairs[4].delta_prime, std::exp(log_w)));
    const BohrSet next(g, next_gamma, next_delta);
    if (!next.members().subset_of(current)) throw LemmaViolation("zp_iterate: Bohr sets not nested");
    state["log_width_bound"] = log_w;
    state["inside_B6_and_B5-B5"] =
        next.members().subset_of(out.b6->members().intersect(B[5].members() - B[5].members()));
    state["d_growth"] = next_gamma.size() - gamma.size();
    st.state = state;
    rec.steps.push_back(st);
    gamma = std::move(next_gamma);
    delta = next_delta;
    current = next.members();
    prev = st.s_row;
    grew = j;
  }
  return flag("step_budget", "no termination within " + std::to_string(max_steps) + " steps",
              {{"frequencies", gamma}, {"delta", delta}, {"S", prev}, {"gains", gains}});
}

}  // namespace rado
