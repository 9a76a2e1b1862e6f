#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rado/constants.hpp"
#include "rado/fourier.hpp"
#include "rado/increment/subspace.hpp"
#include "rado/increment/trace.hpp"

namespace rado {

struct ToyConfig {
  std::size_t codim_budget = 0;  // per increment search; 0 means n
  std::size_t max_steps = 0;     // 0 means r (gain_bound + 1) + 1
  std::size_t candidates = 64;
  ConstantBook book;
};

// colour[x] in [0, r) for every x in F_q^n.
inline std::vector<GroupSubset> colour_classes(const FiniteGroup& g, const std::vector<int>& colour) {
  if (colour.size() != g.order()) throw InputError("colouring must assign every group element");
  int r = 0;
  for (int c : colour) {
    if (c < 0) throw InputError("colouring: negative colour");
    r = std::max(r, c + 1);
  }
  std::vector<GroupSubset> out(static_cast<std::size_t>(r), GroupSubset(g));
  for (std::size_t x = 0; x < colour.size(); ++x) out[static_cast<std::size_t>(colour[x])].insert(x);
  return out;
}

inline std::vector<int> random_colouring(const FiniteGroup& g, int r, std::uint64_t seed) {
  if (r < 1) throw InputError("random_colouring: need at least one colour");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, r - 1);
  std::vector<int> c(g.order());
  for (auto& v : c) v = pick(rng);
  return c;
}

// Triples (x, y, z) in A^3 with ax - ay = bz, by direct enumeration.
inline std::uint64_t triple_loop_count(const GroupSubset& set, std::int64_t a, std::int64_t b) {
  const auto& g = set.group();
  const auto m = set.members();
  std::uint64_t n = 0;
  for (auto x : m)
    for (auto y : m) {
      const std::size_t lhs = g.scale(a, g.sub(x, y));
      for (auto z : m)
        if (g.scale(b, z) == lhs) ++n;
    }
  return n;
}

inline TraceRecord toy_iterate(const FiniteGroup& g, const std::vector<int>& colour, std::int64_t a, std::int64_t b,
                               const ToyConfig& cfg = {}) {
  if (g.is_cyclic()) throw InputError("toy_iterate: F_q^n only");
  if (!g.is_unit(a) || !g.is_unit(b)) throw InputError("toy_iterate: a and b must be nonzero in F_q");
  const auto classes = colour_classes(g, colour);
  const std::size_t r = classes.size();
  const double c32 = cfg.book["c32"];
  const std::size_t bound = gain_bound(r, c32);
  const std::size_t budget = cfg.codim_budget ? cfg.codim_budget : static_cast<std::size_t>(g.dim());
  const std::size_t max_steps = cfg.max_steps ? cfg.max_steps : r * (bound + 1) + 1;

  std::vector<GroupSubset> ac, bc;
  std::vector<std::size_t> sizes;
  for (const auto& c : classes) {
    ac.push_back(c.dilate(a));
    bc.push_back(c.dilate(b));
    sizes.push_back(c.size());
  }

  TraceRecord rec;
  rec.tracer = "toy";
  rec.setup = {{"group", g.name()}, {"a", a}, {"b", b}, {"r", r}, {"class_sizes", sizes},
               {"gain_bound", bound}, {"codim_budget", budget}, {"book", cfg.book.hash()}};

  Subspace v = Subspace::whole(g);
  std::vector<double> prev;
  std::vector<std::size_t> gains(r, 0);
  std::optional<std::size_t> grew;  // class of the last increment

  for (std::size_t i = 0; i < max_steps; ++i) {
    StepRecord st;
    st.step = i;
    st.d = v.codim();
    for (std::size_t j = 0; j < r; ++j) {
      const double s = v.best_coset(ac[j]).first;
      if (s > 1 + 1e-12) throw LemmaViolation("toy_iterate: S exceeds 1");
      if (!prev.empty() && s < prev[j] - 1e-12) throw LemmaViolation("toy_iterate: S decreased");
      st.s_row.push_back(s);
    }
    if (grew) {
      if (st.s_row[*grew] < (1 + c32) * prev[*grew] - 1e-12) throw LemmaViolation("toy_iterate: increment not realised");
      if (++gains[*grew] > bound) throw LemmaViolation("toy_iterate: gain count above the log bound");
    }

    std::vector<double> mub(r);
    std::size_t j = 0;
    for (std::size_t k = 0; k < r; ++k) {
      mub[k] = static_cast<double>(bc[k].intersect(v.members()).size()) / static_cast<double>(v.size());
      if (mub[k] > mub[j]) j = k;
    }
    if (mub[j] < 1.0 / static_cast<double>(r) - 1e-12) throw LemmaViolation("toy_iterate: no class of density 1/r");
    st.j = j;

    const std::uint64_t count = count_triples(classes[j], a, b);
    const double vs = static_cast<double>(v.size());
    const double threshold = vs * vs / (2.0 * static_cast<double>(r * r * r));
    // count >= |V|^2 / 2r^3, compared in integers.
    const bool case1 = static_cast<unsigned __int128>(count) * 2 * r * r * r >=
                       static_cast<unsigned __int128>(v.size()) * v.size();
    st.state = {{"subspace", v.to_json()}, {"mu_bA", mub}, {"count", count}, {"threshold", threshold},
                {"gains", gains}};

    if (case1) {
      st.kase = "1";
      rec.steps.push_back(st);
      const std::uint64_t oracle = triple_loop_count(classes[j], a, b);
      if (oracle != count) throw LemmaViolation("toy_iterate: Fourier count disagrees with enumeration");
      rec.outcome = {false, "terminated", "", j, count, oracle, threshold, {}};
      return rec;
    }

    st.kase = "2";
    const auto [alpha, xi] = v.best_coset(ac[j]);
    const GroupSubset target = ac[j].negate().translate(xi).intersect(v.members());
    const auto inc = spectral_increment(target, v, budget, cfg.book, cfg.candidates);
    st.state["x"] = xi;
    st.state["alpha"] = alpha;
    if (!inc) {
      rec.steps.push_back(st);
      rec.outcome.flagged = true;
      rec.outcome.kind = "increment_budget";
      rec.outcome.reason = "no subspace of codimension <= " + std::to_string(budget) + " lifts density to " +
                           std::to_string((1 + c32) * alpha);
      rec.outcome.dump = {{"step", i}, {"j", j}, {"alpha", alpha}, {"x", xi}, {"subspace", v.to_json()},
                          {"S", st.s_row}, {"target", target.members()}};
      return rec;
    }
    st.state["increment"] = inc->to_json();
    rec.steps.push_back(st);
    prev = st.s_row;
    grew = j;
    v = inc->v;
  }
  rec.outcome.flagged = true;
  rec.outcome.kind = "step_budget";
  rec.outcome.reason = "no termination within " + std::to_string(max_steps) + " steps";
  rec.outcome.dump = {{"subspace", v.to_json()}, {"S", prev}, {"gains", gains}};
  return rec;
}

}  // namespace rado
