#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rado/error.hpp"
#include "rado/group.hpp"

namespace rado {

using RealFunction = std::vector<double>;
using ComplexFunction = std::vector<cplx>;

namespace detail {

// Transform along each base-q digit in turn; sign -1 gives conj(gamma).
inline ComplexFunction separable_transform(const FiniteGroup& g, ComplexFunction a, int sign) {
  const auto q = static_cast<std::size_t>(g.modulus());
  std::size_t stride = 1;
  ComplexFunction tmp(q);
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (std::size_t base = 0; base < a.size(); ++base) {
      if ((base / stride) % q != 0) continue;
      for (std::size_t u = 0; u < q; ++u) {
        cplx s = 0;
        for (std::size_t x = 0; x < q; ++x)
          s += a[base + x * stride] * g.root(sign * static_cast<std::int64_t>(u * x));
        tmp[u] = s;
      }
      for (std::size_t u = 0; u < q; ++u) a[base + u * stride] = tmp[u];
    }
    stride *= q;
  }
  return a;
}

inline ComplexFunction cyclic_transform(const FiniteGroup& g, std::span<const cplx> f, int sign) {
  const std::size_t n = g.order();
  ComplexFunction out(n);
  for (std::size_t u = 0; u < n; ++u) {
    cplx s = 0;
    std::size_t k = 0;  // u * x mod n, updated incrementally
    for (std::size_t x = 0; x < n; ++x) {
      s += f[x] * g.root(sign * static_cast<std::int64_t>(k));
      k += u;
      if (k >= n) k -= n;
    }
    out[u] = s;
  }
  return out;
}

}  // namespace detail

// f^(gamma) = E_x f(x) conj(gamma(x)), normalized by |G|.
inline ComplexFunction dft(const FiniteGroup& g, std::span<const cplx> f) {
  if (f.size() != g.order()) throw InputError("dft: size mismatch");
  ComplexFunction out = g.is_cyclic() ? detail::cyclic_transform(g, f, -1)
                                      : detail::separable_transform(g, ComplexFunction(f.begin(), f.end()), -1);
  const double inv = 1.0 / static_cast<double>(g.order());
  for (auto& v : out) v *= inv;
  return out;
}

inline ComplexFunction dft(const FiniteGroup& g, std::span<const double> f) {
  ComplexFunction c(f.begin(), f.end());
  return dft(g, c);
}

// f(x) = sum_gamma f^(gamma) gamma(x).
inline ComplexFunction inverse_dft(const FiniteGroup& g, std::span<const cplx> spectrum) {
  if (spectrum.size() != g.order()) throw InputError("inverse_dft: size mismatch");
  return g.is_cyclic() ? detail::cyclic_transform(g, spectrum, 1)
                       : detail::separable_transform(g, ComplexFunction(spectrum.begin(), spectrum.end()), 1);
}

// mu^(gamma) = sum_x mu(x) conj(gamma(x)).
inline ComplexFunction fourier_stieltjes(const DensityWeight& mu) {
  const auto& g = mu.group();
  ComplexFunction out = dft(g, std::span<const double>(mu.weights()));
  for (auto& v : out) v *= static_cast<double>(g.order());
  return out;
}

// (f * g)(x) = E_y f(x - y) g(y).
template <typename T>
std::vector<T> convolve(const FiniteGroup& grp, std::span<const T> f, std::span<const T> h) {
  if (f.size() != grp.order() || h.size() != grp.order()) throw InputError("convolve: size mismatch");
  std::vector<T> out(grp.order(), T{});
  for (std::size_t y = 0; y < h.size(); ++y) {
    if (h[y] == T{}) continue;
    for (std::size_t x = 0; x < f.size(); ++x) out[grp.add(x, y)] += f[x] * h[y];
  }
  const double inv = 1.0 / static_cast<double>(grp.order());
  for (auto& v : out) v *= inv;
  return out;
}

inline RealFunction convolve(const FiniteGroup& grp, const RealFunction& f, const RealFunction& h) {
  return convolve<double>(grp, std::span<const double>(f), std::span<const double>(h));
}

// Unnormalized integer convolution: sum_y f(x - y) h(y).
inline std::vector<std::int64_t> convolve_counts(const FiniteGroup& grp, const GroupSubset& f, const GroupSubset& h) {
  std::vector<std::int64_t> out(grp.order(), 0);
  const auto fm = f.members();
  for (auto y : h.members())
    for (auto x : fm) ++out[grp.add(x, y)];
  return out;
}

// (f * mu)(x) = sum_y f(x - y) mu(y).
inline RealFunction convolve(const RealFunction& f, const DensityWeight& mu) {
  const auto& g = mu.group();
  RealFunction out(g.order(), 0.0);
  for (std::size_t y = 0; y < g.order(); ++y) {
    const double w = mu[y];
    if (w == 0) continue;
    for (std::size_t x = 0; x < g.order(); ++x) out[g.add(x, y)] += f[x] * w;
  }
  return out;
}

// <f, g>_{L2(mu)} for real functions.
inline double inner(const RealFunction& f, const RealFunction& h, const DensityWeight& mu) {
  double s = 0;
  for (std::size_t x = 0; x < f.size(); ++x) s += mu[x] * f[x] * h[x];
  return s;
}

inline double lp_norm(const RealFunction& f, const DensityWeight& mu, double p) {
  double s = 0;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (mu[x] != 0) s += mu[x] * std::pow(std::abs(f[x]), p);
  return std::pow(s, 1.0 / p);
}

inline double sup_norm(const RealFunction& f) {
  double m = 0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

// Number of (x, y, z) in A^3 with a x - a y = b z, i.e.
// |G|^2 <1_{aA} * 1_{-aA}, 1_{bA}>, by exact integer convolution.
inline std::uint64_t count_triples(const GroupSubset& set, std::int64_t a, std::int64_t b) {
  const auto& g = set.group();
  if (!g.is_unit(a) || !g.is_unit(b)) throw InputError("count_triples: a and b must be units");
  const GroupSubset aa = set.dilate(a);
  const auto conv = convolve_counts(g, aa, aa.negate());
  std::uint64_t total = 0;
  for (auto z : set.dilate(b).members()) total += static_cast<std::uint64_t>(conv[z]);
  return total;
}

inline GroupSubset dilate(const GroupSubset& set, std::int64_t c) { return set.dilate(c); }

// Characters with |(1_A dmu_base)^(gamma)| >= epsilon * mu_base(A), the boundary
// taken with an absolute slack of 1e-12.
inline std::vector<std::size_t> large_spectrum(const GroupSubset& set, const GroupSubset& base, double epsilon) {
  if (base.empty()) throw InputError("large_spectrum: empty base");
  if (!(epsilon > 0 && epsilon <= 1)) throw InputError("large_spectrum: epsilon must be in (0,1]");
  if (!set.subset_of(base)) throw InputError("large_spectrum: A must lie in the base set");
  const auto& g = set.group();
  const auto members = set.members();
  const double nb = static_cast<double>(base.size());
  const double threshold = epsilon * static_cast<double>(members.size()) / nb;
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < g.order(); ++u) {
    cplx s = 0;
    for (auto x : members) s += std::conj(g.character(u, x));
    if (std::abs(s) / nb >= threshold - 1e-12) out.push_back(u);
  }
  return out;
}

// min Re mu^ >= -tol and max |Im mu^| <= tol.
inline bool is_positive_definite(const DensityWeight& mu, double tol) {
  for (const auto& v : fourier_stieltjes(mu))
    if (v.real() < -tol || std::abs(v.imag()) > tol) return false;
  return true;
}

}  // namespace rado
