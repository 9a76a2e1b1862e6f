#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rado/error.hpp"

namespace rado {

// Named positive constants. Base values are tunable; the relations between
// them (c_me, c962, c96, c128, csl) are computed, never stored.
class ConstantBook {
 public:
  ConstantBook() : values_(defaults()) {}

  static const std::map<std::string, double>& defaults() {
    static const std::map<std::string, double> d = {
        {"growth", 100.0},       // covering bound |T| <= 100^d
        {"c32", 1.0 / 32},       // increment gain
        {"c16", 1.0 / 16},
        {"c8", 1.0 / 8},
        {"specpos", 12.0},       // pointwise error 6*eta*alpha, doubled
        {"c12", 12.0},           // 2*eta / (1/6)
        {"rdc", 4.0},            // sifting: k >= rdc/eps * log(2/kappa)
        {"llc", 4.0},            // local Chang: k >= llc/eps^2 * log(2/alpha)
        {"mzi", 1.0},            // Marcinkiewicz-Zygmund constant
        {"itstep_sift_eps", 0.25},     // sifting parameters fixed by the iteration proof
        {"itstep_sift_kappa", 1.0 / 32},
        {"itstep_prop_eps", 1.0 / 32},
        {"sift_batch", 256.0},   // x-tuples drawn per sifting retry
        {"retries", 32.0},
        {"ascent_iters", 30.0},  // coordinate-ascent sweeps in dissociation tests
    };
    return d;
  }

  double operator[](const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InputError("unknown constant '" + key + "'");
    return it->second;
  }

  void set(const std::string& key, double v) {
    if (!values_.count(key)) throw InputError("unknown constant '" + key + "'");
    if (!(v > 0) || !std::isfinite(v)) throw InputError("constant '" + key + "' must be positive");
    values_[key] = v;
  }

  double c_me() const { return 1.0 / (8.0 * (*this)["specpos"]); }
  double c962() const { return 1.0 / (8.0 * (*this)["c12"]); }
  double c96() const { return c962() / 32.0; }
  double c128() const { return (*this)["c8"] / 32.0; }
  // csl * eps^-2 L^2 p >= k + 1 with k = ceil(64 mzi eps^-2 L^(2/p) p).
  double csl() const { return 64.0 * (*this)["mzi"] + 2.0; }
  // 2^(l-1) >= 4/(sqrt2 - 1) sigma^-1/2 eps^-1 once l >= L log(2/(sigma eps)).
  double big_l() const { return (1.0 + std::log2(4.0 / (std::sqrt(2.0) - 1.0))) / std::log(2.0); }
  double pd() const { return 4.0 * (*this)["llc"] * (1.0 + 32.0 * csl()) / std::log(2.0); }
  // (3/2)(delta/2)^(1/2k) >= 11/8 and k >= 4 rdc log 64 whenever k >= spec log(2/delta).
  double spec() const {
    return std::max(1.0 / (2.0 * std::log(12.0 / 11.0)), 4.0 * (*this)["rdc"] * std::log(64.0) / std::log(2.0));
  }
  double spec3() const { return 6.0 * big_l(); }
  // m >= pd 32^2 l^2 log^2(2 alpha^-4k), using log(2 alpha^-4k) <= 4k log(2/alpha).
  double spec2() const { return 16.0 * 1024.0 * pd(); }

  nlohmann::json derived_json() const {
    return {{"c_me", c_me()}, {"c962", c962()}, {"c96", c96()},     {"c128", c128()},   {"csl", csl()},
            {"L", big_l()},   {"pd", pd()},     {"spec", spec()},   {"spec3", spec3()}, {"spec2", spec2()}};
  }

  int count(const std::string& key) const {
    const double v = (*this)[key];
    if (v != std::floor(v) || v < 1) throw InputError("constant '" + key + "' must be a positive integer");
    return static_cast<int>(v);
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
  }

  static ConstantBook from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("constant book must be a JSON object");
    ConstantBook b;
    for (const auto& [k, v] : j.items()) {
      if (!v.is_number()) throw InputError("constant '" + k + "' is not a number");
      b.set(k, v.get<double>());
    }
    return b;
  }

  // FNV-1a over the canonical dump.
  std::string hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : to_json().dump()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  friend bool operator==(const ConstantBook& a, const ConstantBook& b) { return a.values_ == b.values_; }

 private:
  std::map<std::string, double> values_;
};

struct HypothesisCheck {
  std::string name;
  double measured = 0;
  double required = 0;
  bool upper = true;  // measured <= required when true, else >=
  bool pass = false;
};

inline HypothesisCheck make_check(std::string name, double measured, double required, bool upper,
                                  double slack = 1e-12) {
  HypothesisCheck h{std::move(name), measured, required, upper, false};
  h.pass = upper ? measured <= required + slack : measured >= required - slack;
  return h;
}

struct LemmaVerdict {
  std::string lemma;
  std::vector<HypothesisCheck> hypotheses;
  double lhs = 0;
  double rhs = 0;
  bool lower = true;  // conclusion reads lhs >= rhs when true
  bool pass = false;
  std::uint64_t seed = 0;
  std::string book_hash;
  nlohmann::json details = nlohmann::json::object();

  void conclude(double l, double r, bool ge = true, double slack = 1e-9) {
    lhs = l;
    rhs = r;
    lower = ge;
    pass = ge ? l >= r - slack : l <= r + slack;
  }

  // Records the check; throws HypothesisFail if it does not hold.
  void require(HypothesisCheck h) {
    hypotheses.push_back(h);
    if (!h.pass) throw HypothesisFail(lemma, h.name, h.measured, h.required);
  }

  nlohmann::json to_json() const {
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& h : hypotheses)
      hs.push_back({{"name", h.name},
                    {"measured", h.measured},
                    {"required", h.required},
                    {"direction", h.upper ? "le" : "ge"},
                    {"pass", h.pass}});
    return {{"lemma", lemma},     {"hypotheses", hs},  {"lhs", lhs},
            {"rhs", rhs},         {"direction", lower ? "ge" : "le"},
            {"pass", pass},       {"seed", seed},      {"book", book_hash},
            {"details", details}};
  }
};

}  // namespace rado
