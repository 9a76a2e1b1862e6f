#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <gmpxx.h>
#include <string>
#include <vector>

#include "rado/error.hpp"
#include "rado/group.hpp"

namespace rado {

// Value of min_nu max_y sum_x nu(x) 1_A(y - x) over probability measures nu on
// `support`. upper is attained by nu; lower is attained by the adversary's
// mixed strategy; both are recomputed from the strategies, not read off the LP.
struct GameValue {
  double value = 0;
  double lower = 0;
  double upper = 0;
  double gap = 0;
  bool exact = false;
  std::string exact_value;  // p/q when exact
  std::vector<std::size_t> points;  // support points, ascending
  std::vector<double> nu;           // weight per point
};

namespace detail {

using Column = std::vector<std::uint64_t>;

inline bool column_subset(const Column& a, const Column& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

// Distinct, undominated adversary columns (as row bitsets) with one witness y each.
inline std::vector<std::pair<Column, std::size_t>> game_columns(const GroupSubset& a,
                                                                const std::vector<std::size_t>& pts) {
  const auto& g = a.group();
  const std::size_t words = (pts.size() + 63) / 64;
  std::vector<std::pair<Column, std::size_t>> cols;
  cols.reserve(g.order());
  for (std::size_t y = 0; y < g.order(); ++y) {
    Column c(words, 0);
    bool any = false;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (a.contains(g.sub(y, pts[i]))) {
        c[i / 64] |= 1ull << (i % 64);
        any = true;
      }
    if (any) cols.emplace_back(std::move(c), y);
  }
  std::stable_sort(cols.begin(), cols.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  cols.erase(std::unique(cols.begin(), cols.end(), [](const auto& l, const auto& r) { return l.first == r.first; }),
             cols.end());
  std::vector<char> dominated(cols.size(), 0);
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = 0; j < cols.size() && !dominated[i]; ++j)
      if (i != j && !dominated[j] && column_subset(cols[i].first, cols[j].first)) dominated[i] = 1;
  std::vector<std::pair<Column, std::size_t>> out;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (!dominated[i]) out.push_back(std::move(cols[i]));
  return out;
}

inline bool is_neg(const mpq_class& v) { return sgn(v) < 0; }
inline bool is_neg(double v) { return v < -1e-11; }

// Dual simplex with Bland's rule on  min 1'w  s.t.  M w >= 1, w >= 0,
// written as  -M w + e = -1  with the surplus basis e (dual feasible since c = 1 >= 0).
// Returns (w, u) with u the optimal multipliers of the rows.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> cover_lp(std::size_t rows, const std::vector<Column>& cols) {
  const std::size_t nc = cols.size(), width = nc + rows;
  std::vector<std::vector<T>> tab(rows, std::vector<T>(width + 1, T(0)));
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t r = 0; r < rows; ++r)
      if (cols[c][r / 64] >> (r % 64) & 1) tab[r][c] = T(-1);
  for (std::size_t r = 0; r < rows; ++r) {
    tab[r][nc + r] = T(1);
    tab[r][width] = T(-1);
  }
  std::vector<T> cost(width, T(0));
  for (std::size_t c = 0; c < nc; ++c) cost[c] = T(1);
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = nc + r;

  const std::size_t max_iter = 50 * (width + rows) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iter) throw BudgetError("game LP: simplex iteration budget exhausted");
    std::size_t leave = rows;
    for (std::size_t r = 0; r < rows; ++r)
      if (is_neg(tab[r][width]) && (leave == rows || basis[r] < basis[leave])) leave = r;
    if (leave == rows) break;
    std::size_t enter = width;
    T best(0);
    for (std::size_t c = 0; c < width; ++c) {
      if (!is_neg(tab[leave][c])) continue;
      T ratio = cost[c] / (-tab[leave][c]);
      if (enter == width || ratio < best) {
        best = ratio;
        enter = c;
      }
    }
    if (enter == width) throw LemmaViolation("game LP: primal infeasible although every row is coverable");
    const T piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const T f = tab[r][enter];
      if (f == T(0)) continue;
      for (std::size_t c = 0; c <= width; ++c) tab[r][c] -= f * tab[leave][c];
    }
    const T f = cost[enter];
    if (f != T(0))
      for (std::size_t c = 0; c < width; ++c) cost[c] -= f * tab[leave][c];
    basis[leave] = enter;
  }
  std::vector<T> w(nc, T(0)), u(rows, T(0));
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < nc) w[basis[r]] = tab[r][width];
  for (std::size_t r = 0; r < rows; ++r) u[r] = cost[nc + r];
  return {w, u};
}

template <typename T>
double to_double(const T& v) {
  if constexpr (std::is_same_v<T, mpq_class>)
    return v.get_d();
  else
    return v;
}

}  // namespace detail

inline GameValue game_density(const GroupSubset& a, const GroupSubset& support) {
  if (!(a.group() == support.group())) throw InputError("game_density: group mismatch");
  if (support.empty()) throw InputError("game_density: empty support");
  GameValue out;
  out.points = support.members();
  const std::size_t s = out.points.size();
  if (a.empty()) {
    out.exact = true;
    out.exact_value = "0";
    out.nu.assign(s, 0.0);
    out.nu[0] = 1.0;
    return out;
  }
  const auto cols = detail::game_columns(a, out.points);
  std::vector<detail::Column> bits;
  for (const auto& c : cols) bits.push_back(c.first);

  auto row_hits = [&](std::size_t i, std::size_t c) { return (bits[c][i / 64] >> (i % 64) & 1) != 0; };

  auto finish = [&]<typename T>(const std::vector<T>& w, const std::vector<T>& u) {
    T su(0), sw(0);
    for (const auto& v : u) su += v;
    for (const auto& v : w) sw += v;
    // nu = u / sum(u): payoff against every column, max is the upper value.
    T upper(0), lower(0);
    for (std::size_t c = 0; c < bits.size(); ++c) {
      T p(0);
      for (std::size_t i = 0; i < s; ++i)
        if (row_hits(i, c)) p += u[i] < T(0) ? T(0) : u[i];
      if (p > upper) upper = p;
    }
    bool first = true;
    for (std::size_t i = 0; i < s; ++i) {
      T p(0);
      for (std::size_t c = 0; c < bits.size(); ++c)
        if (row_hits(i, c)) p += w[c] < T(0) ? T(0) : w[c];
      if (first || p < lower) lower = p;
      first = false;
    }
    upper /= su;
    lower /= sw;
    out.nu.resize(s);
    for (std::size_t i = 0; i < s; ++i) out.nu[i] = std::max(0.0, detail::to_double(T(u[i] / su)));
    return std::pair<T, T>(lower, upper);
  };

  if (s <= 64) {
    auto [w, u] = detail::cover_lp<mpq_class>(s, bits);
    auto [lo, hi] = finish(w, u);
    if (lo != hi) throw LemmaViolation("game LP: exact primal and dual values differ");
    out.exact = true;
    out.exact_value = hi.get_str();
    out.value = out.lower = out.upper = hi.get_d();
    out.gap = 0;
  } else {
    auto [w, u] = detail::cover_lp<double>(s, bits);
    auto [lo, hi] = finish(w, u);
    out.lower = lo;
    out.upper = hi;
    out.gap = hi - lo;
    out.value = 0.5 * (lo + hi);
    if (out.gap > 1e-6) throw BudgetError("game LP: duality gap " + std::to_string(out.gap) + " exceeds 1e-6");
  }
  return out;
}

}  // namespace rado
