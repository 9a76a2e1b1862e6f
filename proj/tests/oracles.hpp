#pragma once

// Brute-force reference computations shared by the unit tests and the acceptance
// binary. Nothing here calls into the library's algorithms beyond group arithmetic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "rado/group.hpp"

namespace oracle {

using rado::FiniteGroup;
using rado::GroupSubset;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::complex<double> chi(std::int64_t p, std::size_t u, std::size_t x) {
  const auto pp = static_cast<std::size_t>(p);
  const double t = 2 * std::numbers::pi * static_cast<double>((u % pp) * (x % pp) % pp) / static_cast<double>(p);
  return {std::cos(t), std::sin(t)};
}

// #{(x,y,z) in S^3 : a x - a y = b z}, evaluated on digit vectors coordinate by coordinate.
inline std::uint64_t triple_loop(const GroupSubset& s, std::int64_t a, std::int64_t b) {
  const auto& g = s.group();
  const std::int64_t q = g.modulus();
  std::vector<std::vector<std::int64_t>> dig;
  for (auto x : s.members()) dig.push_back(g.digits(x));
  std::uint64_t n = 0;
  for (const auto& x : dig)
    for (const auto& y : dig)
      for (const auto& z : dig) {
        bool ok = true;
        for (std::size_t k = 0; k < x.size() && ok; ++k) ok = ((a * (x[k] - y[k]) - b * z[k]) % q + q) % q == 0;
        n += ok;
      }
  return n;
}

// Integer solutions of a(x - y) = bz with x, y, z drawn from one list.
inline std::uint64_t integer_count(const std::vector<std::int64_t>& s, std::int64_t a, std::int64_t b) {
  std::uint64_t n = 0;
  for (auto x : s)
    for (auto y : s)
      for (auto z : s) n += a * (x - y) == b * z;
  return n;
}

// B(Gamma, w) in Z/pZ via the arc form: |1 - e(theta)| <= w iff ||theta|| <= asin(w/2)/pi.
inline std::vector<bool> bohr_members(std::int64_t p, const std::vector<std::int64_t>& freqs, double w) {
  const double arc = w >= 2 ? 0.5 : std::asin(w / 2) / std::numbers::pi;
  std::vector<bool> in(static_cast<std::size_t>(p), true);
  for (std::int64_t x = 0; x < p; ++x)
    for (auto t : freqs) {
      std::int64_t m = ((t % p + p) % p) * x % p;
      m = std::min(m, p - m);
      if (static_cast<double>(m) / static_cast<double>(p) > arc + 1e-12) {
        in[static_cast<std::size_t>(x)] = false;
        break;
      }
    }
  return in;
}

inline std::size_t bohr_size(std::int64_t p, const std::vector<std::int64_t>& freqs, double w) {
  const auto in = bohr_members(p, freqs, w);
  return static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
}

// |A + B| by a double loop.
inline std::size_t sumset_size(const GroupSubset& a, const GroupSubset& b) {
  const auto& g = a.group();
  std::vector<bool> hit(g.order(), false);
  for (auto x : a.members())
    for (auto y : b.members()) hit[g.add(x, y)] = true;
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), true));
}

// |A cap (A + u)| / |G| for every u.
inline std::vector<double> autocorrelation(const GroupSubset& a) {
  const auto& g = a.group();
  std::vector<double> out(g.order(), 0.0);
  const auto m = a.members();
  for (std::size_t u = 0; u < g.order(); ++u) {
    std::size_t c = 0;
    for (auto x : m) c += a.contains(g.sub(x, u));
    out[u] = static_cast<double>(c) / static_cast<double>(g.order());
  }
  return out;
}

// max_y |A cap (y - B)| / |B|.
inline double sup_density(const GroupSubset& a, const GroupSubset& b) {
  const auto& g = a.group();
  std::size_t best = 0;
  for (std::size_t y = 0; y < g.order(); ++y) {
    std::size_t c = 0;
    for (auto x : b.members()) c += a.contains(g.sub(y, x));
    best = std::max(best, c);
  }
  return static_cast<double>(best) / static_cast<double>(b.size());
}

namespace detail {

// Small dense system by partial pivoting; false if singular.
inline bool solve(std::vector<std::vector<double>> m, std::vector<double> rhs, std::vector<double>& x) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-10) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

}  // namespace detail

// min over probability nu on pts of max_y sum_x nu(x) 1_A(y - x), by vertex
// enumeration: every vertex has a row support P and |P| tight columns.
inline double game_value(const GroupSubset& a, const std::vector<std::size_t>& pts) {
  const auto& g = a.group();
  std::vector<std::vector<int>> cols;
  for (std::size_t y = 0; y < g.order(); ++y) {
    std::vector<int> c;
    for (auto x : pts) c.push_back(a.contains(g.sub(y, x)));
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  }
  const std::size_t s = pts.size();
  double best = 2;
  for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < s; ++i)
      if (mask >> i & 1) rows.push_back(i);
    const std::size_t k = rows.size();
    if (k > cols.size()) continue;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      // unknowns: nu on rows, then t
      std::vector<std::vector<double>> m(k + 1, std::vector<double>(k + 1, 0.0));
      std::vector<double> rhs(k + 1, 0.0), sol;
      for (std::size_t i = 0; i < k; ++i) m[0][i] = 1;
      rhs[0] = 1;
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) m[j + 1][i] = cols[pick[j]][rows[i]];
        m[j + 1][k] = -1;
      }
      if (detail::solve(m, rhs, sol) && std::all_of(sol.begin(), sol.end() - 1, [](double v) { return v >= -1e-12; })) {
        double worst = 0;
        for (const auto& c : cols) {
          double p = 0;
          for (std::size_t i = 0; i < k; ++i) p += c[rows[i]] * sol[i];
          worst = std::max(worst, p);
        }
        best = std::min(best, worst);
      }
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == cols.size() - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return best;
}

}  // namespace oracle
