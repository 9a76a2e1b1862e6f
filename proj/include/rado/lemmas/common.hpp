#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rado/fourier.hpp"
#include "rado/group.hpp"

namespace rado {

inline double ratio_of(std::size_t a, std::size_t b) { return static_cast<double>(a) / static_cast<double>(b); }

// 1_X * 1_{-X}(u) = |X cap (u + X)| / |G|.
inline RealFunction autocorrelation(const GroupSubset& x) {
  const auto counts = convolve_counts(x.group(), x, x.negate());
  RealFunction out(counts.size());
  const double n = static_cast<double>(x.group().order());
  for (std::size_t u = 0; u < counts.size(); ++u) out[u] = static_cast<double>(counts[u]) / n;
  return out;
}

// mu~_{B1} * mu~_{B2} * mu_{B2} * mu_{B1}.
inline DensityWeight fourfold_measure(const GroupSubset& b1, const GroupSubset& b2) {
  const auto m1 = DensityWeight::uniform_on(b1), m2 = DensityWeight::uniform_on(b2);
  return m1.reflect().convolve(m2.reflect()).convolve(m2).convolve(m1);
}

// mu_B(A) = |A cap B| / |B|.
inline double relative_density(const GroupSubset& a, const GroupSubset& b) {
  return ratio_of(a.intersect(b).size(), b.size());
}

// mu(B + C) / mu(B).
inline double growth_of(const GroupSubset& b, const GroupSubset& c) { return ratio_of((b + c).size(), b.size()); }

// k-fold sumset for a possibly astronomical natural k. A set containing 0 has
// stabilised after |G| steps, so clamping is exact there.
inline GroupSubset multiple_of(const GroupSubset& b, double k) {
  const double cap = static_cast<double>(b.group().order());
  if (b.contains(0) || k <= cap) return b.multiple(static_cast<std::size_t>(std::min(k, cap)));
  throw InputError("multiple_of: k too large for a set without 0");
}

inline void require_natural(double k, const char* what) {
  if (!(k >= 1) || std::floor(k) != k || !std::isfinite(k)) throw InputError(std::string(what) + " must be a positive integer");
}

}  // namespace rado
