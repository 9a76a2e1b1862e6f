#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rado/colouring.hpp"
#include "rado/equation.hpp"
#include "rado/error.hpp"

namespace rado {

struct MonoSolution {
  int colour = 0;
  std::vector<std::int64_t> x;
};

namespace detail {

// Enumerates x in members^d with a.x = 0, solving the last nonzero coordinate.
// `visit` returns true to stop. `member` decides membership of a solved value.
template <typename Member, typename Visit>
bool enumerate_solutions(const CoefficientVector& a, std::span<const std::int64_t> members,
                         Member&& member, bool distinct, Visit&& visit) {
  const std::size_t d = a.dim();
  if (members.empty()) return false;
  std::optional<std::size_t> solve;
  for (std::size_t i = d; i-- > 0;)
    if (a[i] != 0) {
      solve = i;
      break;
    }
  std::vector<std::int64_t> x(d, members.front());
  std::function<bool(std::size_t, std::int64_t)> rec = [&](std::size_t pos, std::int64_t partial) -> bool {
    if (pos == d) {
      if (!solve) {
        if (distinct) {
          std::unordered_set<std::int64_t> seen(x.begin(), x.end());
          if (seen.size() != d) return false;
        }
        return visit(x);
      }
      return false;
    }
    if (solve && pos == *solve) {
      // Remaining positions after `solve` all have zero coefficients; fill them later.
      const std::int64_t ai = a[pos];
      if (partial % ai != 0) return false;
      const std::int64_t v = checked::neg(partial / ai);
      if (!member(v)) return false;
      x[pos] = v;
      std::function<bool(std::size_t)> fill = [&](std::size_t q) -> bool {
        if (q == d) {
          if (distinct) {
            std::unordered_set<std::int64_t> seen(x.begin(), x.end());
            if (seen.size() != d) return false;
          }
          return visit(x);
        }
        for (auto m : members) {
          x[q] = m;
          if (fill(q + 1)) return true;
          if (!distinct) break;
        }
        return false;
      };
      return fill(pos + 1);
    }
    for (auto m : members) {
      x[pos] = m;
      if (rec(pos + 1, checked::add(partial, checked::mul(a[pos], m)))) return true;
    }
    return false;
  };
  return rec(0, 0);
}

}  // namespace detail

// First monochromatic solution in colour order, then lexicographic order of the
// class members. Repeated coordinates are allowed unless `distinct`.
inline std::optional<MonoSolution> find_mono_solution(const IntervalColouring& c, const CoefficientVector& a,
                                                      bool distinct = false) {
  const auto classes = c.classes();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const int col = static_cast<int>(k);
    std::optional<MonoSolution> found;
    auto member = [&](std::int64_t v) { return c.in_domain(v) && c.colour(v) == col; };
    detail::enumerate_solutions(a, classes[k], member, distinct, [&](const std::vector<std::int64_t>& x) {
      found = MonoSolution{col, x};
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

struct RadoResult {
  std::optional<std::int64_t> value;
  // Avoiding colouring of [value-1] when value is set, of [n_max] otherwise.
  std::optional<IntervalColouring> certificate;
  std::uint64_t nodes_explored = 0;
};

namespace detail {

// Depth-first search over canonical colourings of [1..n]: element 1 gets colour
// 0 and colour c+1 is used only after colour c. Tracks the deepest avoiding
// prefix; stops a subtree once it reaches `cap`.
class ColouringDfs {
 public:
  ColouringDfs(const CoefficientVector& a, int r, std::int64_t cap, bool distinct)
      : a_(a), r_(r), cap_(cap), distinct_(distinct), members_(static_cast<std::size_t>(r)) {
    colour_.push_back(-1);  // index 0 unused
  }

  struct Outcome {
    std::int64_t depth = 0;
    std::vector<int> best;  // colours of 1..depth
    std::uint64_t nodes = 0;
  };

  // Assigns a fixed prefix (must be avoiding), then explores below it.
  Outcome run_from(const std::vector<int>& prefix) {
    out_ = Outcome{};
    for (int c : prefix) {
      if (!push(c)) throw ContractError("prefix is not avoiding");
    }
    record();
    explore();
    while (size() > 0) pop();
    return out_;
  }

  // Collects avoiding canonical prefixes of length `depth` (or shorter dead ends
  // are recorded in `shallow`) in DFS order.
  void prefixes(std::int64_t depth, std::vector<std::vector<int>>& out, Outcome& shallow) {
    out_ = Outcome{};
    record();
    collect(depth, out);
    shallow = out_;
  }

 private:
  std::int64_t size() const { return static_cast<std::int64_t>(colour_.size()) - 1; }

  int max_used() const {
    int m = -1;
    for (std::size_t i = 1; i < colour_.size(); ++i) m = std::max(m, colour_[i]);
    return m;
  }

  bool in_class(std::int64_t v, int c) const {
    return v >= 1 && v <= size() && colour_[static_cast<std::size_t>(v)] == c;
  }

  // Pushes element size()+1 with colour c unless that creates a monochromatic solution.
  bool push(int c) {
    ++out_.nodes;
    const std::int64_t n = size() + 1;
    colour_.push_back(c);
    auto& mem = members_[static_cast<std::size_t>(c)];
    mem.push_back(n);
    bool hit = false;
    if (distinct_) {
      hit = detail::enumerate_solutions(a_, mem, [&](std::int64_t v) { return in_class(v, c); }, true,
                                        [&](const std::vector<std::int64_t>& x) {
                                          return std::find(x.begin(), x.end(), n) != x.end();
                                        });
    } else {
      hit = solution_through(n, c);
    }
    if (hit) {
      pop();
      return false;
    }
    return true;
  }

  void pop() {
    const int c = colour_.back();
    members_[static_cast<std::size_t>(c)].pop_back();
    colour_.pop_back();
  }

  // Does some solution inside class c use the newest element n?
  bool solution_through(std::int64_t n, int c) const {
    const std::size_t d = a_.dim();
    const auto& mem = members_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < d; ++i) {
      if (a_[i] == 0) continue;
      std::optional<std::size_t> solve;
      for (std::size_t s = d; s-- > 0;)
        if (s != i && a_[s] != 0) {
          solve = s;
          break;
        }
      if (!solve) {
        // a_i * n + (zero terms) = 0 has no solution with n >= 1.
        continue;
      }
      // Enumerate the other nonzero positions over the class.
      std::vector<std::size_t> free;
      for (std::size_t s = 0; s < d; ++s)
        if (s != i && s != *solve && a_[s] != 0) free.push_back(s);
      std::function<bool(std::size_t, std::int64_t)> rec = [&](std::size_t k, std::int64_t partial) -> bool {
        if (k == free.size()) {
          const std::int64_t as = a_[*solve];
          if (partial % as != 0) return false;
          const std::int64_t v = -(partial / as);
          return in_class(v, c);
        }
        for (auto m : mem)
          if (rec(k + 1, checked::add(partial, checked::mul(a_[free[k]], m)))) return true;
        return false;
      };
      if (rec(0, checked::mul(a_[i], n))) return true;
    }
    return false;
  }

  void record() {
    if (size() > out_.depth) {
      out_.depth = size();
      out_.best.assign(colour_.begin() + 1, colour_.end());
    }
  }

  // Returns true once the cap is reached.
  bool explore() {
    if (size() >= cap_) return true;
    const int limit = std::min(r_ - 1, max_used() + 1);
    for (int c = 0; c <= limit; ++c) {
      if (!push(c)) continue;
      record();
      const bool done = explore();
      pop();
      if (done) return true;
    }
    return false;
  }

  void collect(std::int64_t depth, std::vector<std::vector<int>>& out) {
    if (size() >= cap_) return;
    if (size() == depth) {
      out.emplace_back(colour_.begin() + 1, colour_.end());
      return;
    }
    const int limit = std::min(r_ - 1, max_used() + 1);
    for (int c = 0; c <= limit; ++c) {
      if (!push(c)) continue;
      record();
      collect(depth, out);
      pop();
    }
  }

  const CoefficientVector& a_;
  int r_;
  std::int64_t cap_;
  bool distinct_;
  std::vector<int> colour_;
  std::vector<std::vector<std::int64_t>> members_;
  Outcome out_;
};

inline IntervalColouring colouring_from(const std::vector<int>& colours, int r) {
  IntervalColouring c(static_cast<std::int64_t>(colours.size()), false, r);
  for (std::size_t i = 0; i < colours.size(); ++i) c.set(static_cast<std::int64_t>(i + 1), colours[i]);
  return c;
}

inline ColouringDfs::Outcome deepest_avoiding(const CoefficientVector& a, int r, std::int64_t cap,
                                              unsigned threads, bool distinct) {
  if (threads <= 1) {
    ColouringDfs dfs(a, r, cap, distinct);
    return dfs.run_from({});
  }
  // Split at a fixed depth; subtrees are explored independently and merged in
  // prefix order, so the result does not depend on the schedule.
  const std::int64_t split = std::min<std::int64_t>(cap, 6);
  ColouringDfs root(a, r, cap, distinct);
  std::vector<std::vector<int>> prefixes;
  ColouringDfs::Outcome merged;
  root.prefixes(split, prefixes, merged);
  std::vector<ColouringDfs::Outcome> results(prefixes.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      ColouringDfs dfs(a, r, cap, distinct);
      for (std::size_t i = next++; i < prefixes.size(); i = next++) results[i] = dfs.run_from(prefixes[i]);
    });
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < results.size(); ++i) {
    // run_from re-counts the prefix pushes already counted by the split.
    merged.nodes += results[i].nodes - static_cast<std::uint64_t>(prefixes[i].size());
    if (results[i].depth > merged.depth) {
      merged.depth = results[i].depth;
      merged.best = results[i].best;
    }
  }
  return merged;
}

}  // namespace detail

// Smallest N <= n_max such that every r-colouring of [N] has a monochromatic
// solution, by exhaustion; inconclusive (value empty) if an avoiding colouring
// of [n_max] exists.
inline RadoResult rado_number(const CoefficientVector& a, int r, std::int64_t n_max, unsigned threads = 1,
                              bool distinct = false) {
  if (r < 1) throw InputError("rado_number: r must be >= 1");
  if (n_max < 1) throw InputError("rado_number: n_max must be >= 1");
  if (!distinct && !is_partition_regular(a))
    throw InputError("rado_number: equation " + a.str() + " is not partition regular");
  auto out = detail::deepest_avoiding(a, r, n_max, threads, distinct);
  RadoResult res;
  res.nodes_explored = out.nodes;
  if (out.depth < n_max) res.value = out.depth + 1;
  res.certificate = detail::colouring_from(out.best, r);
  return res;
}

// An r-colouring of [n] with no monochromatic solution, if one exists.
inline std::optional<IntervalColouring> witness_colouring(const CoefficientVector& a, int r, std::int64_t n,
                                                          bool distinct = false) {
  if (r < 1) throw InputError("witness_colouring: r must be >= 1");
  if (n < 0) throw InputError("witness_colouring: negative n");
  if (n == 0) return IntervalColouring(0, false, r);
  auto out = detail::deepest_avoiding(a, r, n, 1, distinct);
  if (out.depth < n) return std::nullopt;
  return detail::colouring_from(out.best, r);
}

// Number of (x, y, z) in A^3 with a*x - a*y = b*z.
inline std::uint64_t count_solutions_interval(std::span<const std::int64_t> set, std::int64_t a,
                                              std::int64_t b) {
  if (a == 0 || b == 0) throw InputError("count_solutions_interval: a and b must be nonzero");
  if (set.empty()) return 0;
  const auto [mn, mx] = std::minmax_element(set.begin(), set.end());
  const std::int64_t lo = *mn, hi = *mx;
  std::vector<char> in(static_cast<std::size_t>(hi - lo + 1), 0);
  for (auto v : set) in[static_cast<std::size_t>(v - lo)] = 1;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!in[i]) continue;
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (!in[j]) continue;
      const std::int64_t x = lo + static_cast<std::int64_t>(i), y = lo + static_cast<std::int64_t>(j);
      const std::int64_t num = checked::mul(a, checked::sub(x, y));
      if (num % b != 0) continue;
      const std::int64_t z = num / b;
      if (z >= lo && z <= hi && in[static_cast<std::size_t>(z - lo)]) ++count;
    }
  }
  return count;
}

}  // namespace rado
