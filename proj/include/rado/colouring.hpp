#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rado/error.hpp"

namespace rado {

// A partition of [N] = {1..N} (unsigned) or {-N..N} (signed) into r classes.
class IntervalColouring {
 public:
  IntervalColouring(std::int64_t n, bool is_signed, int r)
      : n_(n), signed_(is_signed), r_(r), colour_(size_of(n, is_signed), -1) {
    if (n < 0) throw InputError("colouring: negative N");
    if (r < 1) throw InputError("colouring: need at least one colour");
  }

  // Every element must appear in exactly one class.
  static IntervalColouring from_classes(std::int64_t n, bool is_signed,
                                        const std::vector<std::vector<std::int64_t>>& classes) {
    IntervalColouring c(n, is_signed, std::max<int>(1, static_cast<int>(classes.size())));
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (auto x : classes[k]) {
        if (!c.in_domain(x)) throw InputError("colouring: element " + std::to_string(x) + " outside domain");
        if (c.colour(x) != -1) throw InputError("colouring: element " + std::to_string(x) + " coloured twice");
        c.set(x, static_cast<int>(k));
      }
    for (std::int64_t x = c.lo(); x <= c.hi(); ++x)
      if (c.colour(x) == -1) throw InputError("colouring: element " + std::to_string(x) + " uncoloured");
    return c;
  }

  std::int64_t n() const { return n_; }
  bool is_signed() const { return signed_; }
  int colours() const { return r_; }
  std::int64_t lo() const { return signed_ ? -n_ : 1; }
  std::int64_t hi() const { return n_; }
  bool in_domain(std::int64_t x) const { return x >= lo() && x <= hi(); }

  int colour(std::int64_t x) const { return colour_[static_cast<std::size_t>(x - lo())]; }
  void set(std::int64_t x, int c) {
    if (c < 0 || c >= r_) throw ContractError("colour id out of range");
    colour_[static_cast<std::size_t>(x - lo())] = c;
  }

  std::vector<std::vector<std::int64_t>> classes() const {
    std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(r_));
    for (std::int64_t x = lo(); x <= hi(); ++x)
      if (colour(x) >= 0) out[static_cast<std::size_t>(colour(x))].push_back(x);
    return out;
  }

  nlohmann::json to_json() const {
    return {{"n", n_}, {"signed", signed_}, {"classes", classes()}};
  }

  static IntervalColouring from_json(const nlohmann::json& j) {
    try {
      return from_classes(j.at("n").get<std::int64_t>(), j.value("signed", false),
                          j.at("classes").get<std::vector<std::vector<std::int64_t>>>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("colouring json: ") + e.what());
    }
  }

  friend bool operator==(const IntervalColouring&, const IntervalColouring&) = default;

 private:
  static std::size_t size_of(std::int64_t n, bool s) {
    return static_cast<std::size_t>(s ? 2 * n + 1 : n);
  }

  std::int64_t n_;
  bool signed_;
  int r_;
  std::vector<int> colour_;
};

// C' = {A, -A : A in C} u {{0}} on {-N..N}; empty classes are dropped. Class
// order is A_1, -A_1, A_2, -A_2, ..., {0}.
inline IntervalColouring lift_colouring(const IntervalColouring& c) {
  if (c.is_signed()) throw InputError("lift_colouring: input must colour [N]");
  std::vector<std::vector<std::int64_t>> lifted;
  for (const auto& cls : c.classes()) {
    if (cls.empty()) continue;
    std::vector<std::int64_t> neg;
    for (auto it = cls.rbegin(); it != cls.rend(); ++it) neg.push_back(-*it);
    lifted.push_back(cls);
    lifted.push_back(std::move(neg));
  }
  lifted.push_back({0});
  return IntervalColouring::from_classes(c.n(), true, lifted);
}

// Restriction of a signed colouring to [N], renumbering the surviving classes.
inline IntervalColouring restrict_positive(const IntervalColouring& c) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& cls : c.classes()) {
    std::vector<std::int64_t> pos;
    for (auto x : cls)
      if (x > 0) pos.push_back(x);
    if (!pos.empty()) out.push_back(std::move(pos));
  }
  return IntervalColouring::from_classes(c.n(), false, out);
}

}  // namespace rado
