#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rado/error.hpp"

namespace rado {

// Integer coefficient vector a = (a_1, ..., a_d) of the equation a.x = 0.
class CoefficientVector {
 public:
  explicit CoefficientVector(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InputError("coefficient vector must have at least one entry");
  }

  // Parses "1,1,-1". Whitespace around entries is ignored.
  static CoefficientVector parse(std::string_view text) {
    std::vector<std::int64_t> out;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ',')) {
      auto first = item.find_first_not_of(" \t");
      auto last = item.find_last_not_of(" \t");
      if (first == std::string::npos) throw InputError("empty coefficient in '" + std::string(text) + "'");
      item = item.substr(first, last - first + 1);
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(item, &used);
      } catch (const std::exception&) {
        throw InputError("bad coefficient '" + item + "'");
      }
      if (used != item.size()) throw InputError("bad coefficient '" + item + "'");
      out.push_back(v);
    }
    if (out.empty()) throw InputError("empty coefficient vector");
    return CoefficientVector(std::move(out));
  }

  std::size_t dim() const { return entries_.size(); }
  std::int64_t operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<std::int64_t>& entries() const { return entries_; }

  std::int64_t dot(const std::vector<std::int64_t>& x) const {
    if (x.size() != entries_.size()) throw ContractError("dot: dimension mismatch");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s = checked::add(s, checked::mul(entries_[i], x[i]));
    return s;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(entries_[i]);
    }
    return s;
  }

  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  std::vector<std::int64_t> entries_;
};

// Zero-sum index set I with a nonzero pivot a_j (j in I), and b = -sum_{i not in I} a_i.
// Indices are 0-based.
struct RegularityWitness {
  std::vector<std::size_t> index_set;
  std::size_t pivot = 0;
  std::int64_t residual = 0;

  bool contains(std::size_t i) const {
    return std::find(index_set.begin(), index_set.end(), i) != index_set.end();
  }
  friend bool operator==(const RegularityWitness&, const RegularityWitness&) = default;
};

inline bool is_invariant(const CoefficientVector& a) {
  std::int64_t s = 0;
  for (auto v : a.entries()) s = checked::add(s, v);
  return s == 0;
}

// Rado's single-equation criterion. Among valid index sets returns the one of
// minimum size, ties broken lexicographically; the pivot is the least index in
// I with a nonzero coefficient.
inline std::optional<RegularityWitness> is_partition_regular(const CoefficientVector& a) {
  const std::size_t d = a.dim();
  if (d > 62) throw InputError("dimension too large for subset enumeration");
  std::vector<std::size_t> idx;
  for (std::size_t size = 1; size <= d; ++size) {
    // Combinations of `size` indices in lexicographic order.
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::int64_t sum = 0;
      std::optional<std::size_t> pivot;
      for (auto i : idx) {
        sum = checked::add(sum, a[i]);
        if (!pivot && a[i] != 0) pivot = i;
      }
      if (sum == 0 && pivot) {
        RegularityWitness w;
        w.index_set = idx;
        w.pivot = *pivot;
        std::int64_t rest = 0;
        for (std::size_t i = 0; i < d; ++i)
          if (!w.contains(i)) rest = checked::add(rest, a[i]);
        w.residual = checked::neg(rest);
        return w;
      }
      std::size_t k = size;
      while (k > 0 && idx[k - 1] == d - size + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t i = k; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return std::nullopt;
}

// Builds x from a solution (y, z, w) of a_j*y - a_j*z = b*w: x_j = y, x_k = z on
// I \ {j}, x_k = w off I.
inline std::vector<std::int64_t> assemble_solution(std::int64_t y, std::int64_t z, std::int64_t w,
                                                   const RegularityWitness& witness,
                                                   const CoefficientVector& a) {
  const std::int64_t aj = a[witness.pivot];
  const std::int64_t lhs = checked::sub(checked::mul(aj, y), checked::mul(aj, z));
  const std::int64_t rhs = checked::mul(witness.residual, w);
  if (lhs != rhs)
    throw ContractError("assemble_solution: a_j*y - a_j*z != b*w (" + std::to_string(lhs) +
                        " vs " + std::to_string(rhs) + ")");
  std::vector<std::int64_t> x(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    if (k == witness.pivot)
      x[k] = y;
    else if (witness.contains(k))
      x[k] = z;
    else
      x[k] = w;
  }
  if (a.dot(x) != 0) throw LemmaViolation("assemble_solution produced a non-solution");
  return x;
}

}  // namespace rado
