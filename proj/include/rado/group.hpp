#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "rado/error.hpp"

namespace rado {

using cplx = std::complex<double>;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t mod(std::int64_t x, std::int64_t m) {
  x %= m;
  return x < 0 ? x + m : x;
}

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b = mod(b, m);
  while (e > 0) {
    if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % m);
    b = static_cast<std::int64_t>((__int128)b * b % m);
    e >>= 1;
  }
  return r;
}

// Z/pZ or F_q^n with p, q prime. Elements and characters are both indexed by
// 0..order()-1; for F_q^n the index is the little-endian base-q digit string.
// Character u acts by x -> exp(2 pi i <u, x> / m) where m is p or q.
class FiniteGroup {
 public:
  static FiniteGroup cyclic(std::int64_t p) {
    if (!is_prime(p)) throw InputError("Z/pZ needs p prime, got " + std::to_string(p));
    return FiniteGroup(p, 1);
  }

  static FiniteGroup vector_space(std::int64_t q, int n) {
    if (!is_prime(q)) throw InputError("F_q^n needs q prime, got " + std::to_string(q));
    if (n < 1) throw InputError("F_q^n needs n >= 1");
    double size = std::pow(static_cast<double>(q), n);
    if (size > 1e7) throw InputError("group too large for dense tables");
    return FiniteGroup(q, n, true);
  }

  // "zp:101" or "fq:3^4".
  static FiniteGroup parse(const std::string& s) {
    try {
      if (s.rfind("zp:", 0) == 0) return cyclic(std::stoll(s.substr(3)));
      if (s.rfind("fq:", 0) == 0) {
        auto caret = s.find('^');
        if (caret == std::string::npos) throw InputError("bad group '" + s + "'");
        return vector_space(std::stoll(s.substr(3, caret - 3)), std::stoi(s.substr(caret + 1)));
      }
    } catch (const std::logic_error&) {
      throw InputError("bad group '" + s + "'");
    }
    throw InputError("bad group '" + s + "'");
  }

  std::string name() const {
    return vector_ ? "fq:" + std::to_string(m_) + "^" + std::to_string(n_) : "zp:" + std::to_string(m_);
  }

  bool is_cyclic() const { return !vector_; }
  std::int64_t modulus() const { return m_; }
  int dim() const { return n_; }
  std::size_t order() const { return order_; }

  std::size_t add(std::size_t x, std::size_t y) const {
    if (!vector_) return (x + y) % order_;
    return combine(x, y, [&](std::int64_t a, std::int64_t b) { return (a + b) % m_; });
  }
  std::size_t neg(std::size_t x) const {
    if (!vector_) return x == 0 ? 0 : order_ - x;
    return combine(x, 0, [&](std::int64_t a, std::int64_t) { return (m_ - a) % m_; });
  }
  std::size_t sub(std::size_t x, std::size_t y) const { return add(x, neg(y)); }
  std::size_t scale(std::int64_t c, std::size_t x) const {
    const std::int64_t cc = mod(c, m_);
    if (!vector_) return static_cast<std::size_t>((static_cast<std::int64_t>(x) * cc) % m_);
    return combine(x, 0, [&](std::int64_t a, std::int64_t) { return (a * cc) % m_; });
  }

  bool is_unit(std::int64_t c) const { return mod(c, m_) != 0; }
  std::int64_t inverse(std::int64_t c) const {
    if (!is_unit(c)) throw InputError("scalar " + std::to_string(c) + " is not invertible mod " + std::to_string(m_));
    return mod_pow(c, m_ - 2, m_);
  }

  // <u, x> mod m.
  std::int64_t pairing(std::size_t u, std::size_t x) const {
    if (!vector_) return static_cast<std::int64_t>((static_cast<unsigned __int128>(u) * x) % order_);
    std::int64_t s = 0;
    for (int k = 0; k < n_; ++k) {
      s += static_cast<std::int64_t>(u % m_) * static_cast<std::int64_t>(x % m_);
      u /= m_;
      x /= m_;
    }
    return s % m_;
  }

  cplx root(std::int64_t k) const { return roots_[static_cast<std::size_t>(mod(k, m_))]; }
  cplx character(std::size_t u, std::size_t x) const { return roots_[static_cast<std::size_t>(pairing(u, x))]; }

  std::vector<std::int64_t> digits(std::size_t x) const {
    std::vector<std::int64_t> d(static_cast<std::size_t>(n_));
    for (auto& v : d) {
      v = static_cast<std::int64_t>(x % m_);
      x /= m_;
    }
    return d;
  }
  std::size_t from_digits(const std::vector<std::int64_t>& d) const {
    std::size_t x = 0;
    for (std::size_t k = d.size(); k-- > 0;) x = x * static_cast<std::size_t>(m_) + static_cast<std::size_t>(mod(d[k], m_));
    return x;
  }

  // Representative of a cyclic element in (-p/2, p/2].
  std::int64_t centred(std::size_t x) const {
    const auto v = static_cast<std::int64_t>(x);
    return v > m_ / 2 ? v - m_ : v;
  }
  std::size_t from_int(std::int64_t v) const {
    if (vector_) throw ContractError("from_int on a vector space");
    return static_cast<std::size_t>(mod(v, m_));
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.m_ == b.m_ && a.n_ == b.n_ && a.vector_ == b.vector_;
  }

 private:
  FiniteGroup(std::int64_t m, int n, bool vec = false) : m_(m), n_(n), vector_(vec) {
    order_ = 1;
    for (int k = 0; k < n; ++k) order_ *= static_cast<std::size_t>(m);
    roots_.resize(static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
      roots_[static_cast<std::size_t>(k)] = {std::cos(t), std::sin(t)};
    }
  }

  template <typename F>
  std::size_t combine(std::size_t x, std::size_t y, F&& f) const {
    std::size_t out = 0, place = 1;
    for (int k = 0; k < n_; ++k) {
      out += static_cast<std::size_t>(f(static_cast<std::int64_t>(x % m_), static_cast<std::int64_t>(y % m_))) * place;
      x /= m_;
      y /= m_;
      place *= static_cast<std::size_t>(m_);
    }
    return out;
  }

  std::int64_t m_;
  int n_;
  bool vector_;
  std::size_t order_ = 1;
  std::vector<cplx> roots_;
};

// Dense indicator of a subset of a finite group.
class GroupSubset {
 public:
  explicit GroupSubset(FiniteGroup g) : g_(std::move(g)), bits_(g_.order(), 0) {}
  GroupSubset(FiniteGroup g, const std::vector<std::size_t>& members) : GroupSubset(std::move(g)) {
    for (auto x : members) insert(x);
  }

  static GroupSubset whole(const FiniteGroup& g) {
    GroupSubset s(g);
    std::fill(s.bits_.begin(), s.bits_.end(), 1);
    return s;
  }
  static GroupSubset singleton(const FiniteGroup& g, std::size_t x) { return GroupSubset(g, {x}); }

  const FiniteGroup& group() const { return g_; }
  bool contains(std::size_t x) const { return bits_[x] != 0; }
  void insert(std::size_t x) {
    if (x >= bits_.size()) throw InputError("element " + std::to_string(x) + " outside group " + g_.name());
    bits_[x] = 1;
  }
  void erase(std::size_t x) { bits_[x] = 0; }

  std::size_t size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }
  bool empty() const { return size() == 0; }
  double density() const { return static_cast<double>(size()) / static_cast<double>(g_.order()); }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < bits_.size(); ++x)
      if (bits_[x]) out.push_back(x);
    return out;
  }

  std::vector<double> indicator() const { return {bits_.begin(), bits_.end()}; }

  bool subset_of(const GroupSubset& o) const {
    for (std::size_t x = 0; x < bits_.size(); ++x)
      if (bits_[x] && !o.bits_[x]) return false;
    return true;
  }

  GroupSubset intersect(const GroupSubset& o) const {
    GroupSubset s(g_);
    for (std::size_t x = 0; x < bits_.size(); ++x) s.bits_[x] = bits_[x] & o.bits_[x];
    return s;
  }
  GroupSubset unite(const GroupSubset& o) const {
    GroupSubset s(g_);
    for (std::size_t x = 0; x < bits_.size(); ++x) s.bits_[x] = bits_[x] | o.bits_[x];
    return s;
  }
  GroupSubset complement() const {
    GroupSubset s(g_);
    for (std::size_t x = 0; x < bits_.size(); ++x) s.bits_[x] = !bits_[x];
    return s;
  }

  GroupSubset negate() const {
    GroupSubset s(g_);
    for (auto x : members()) s.bits_[g_.neg(x)] = 1;
    return s;
  }
  GroupSubset translate(std::size_t t) const {
    GroupSubset s(g_);
    for (auto x : members()) s.bits_[g_.add(x, t)] = 1;
    return s;
  }
  GroupSubset dilate(std::int64_t c) const {
    if (!g_.is_unit(c)) throw InputError("dilate: scalar " + std::to_string(c) + " is not invertible");
    GroupSubset s(g_);
    for (auto x : members()) s.bits_[g_.scale(c, x)] = 1;
    return s;
  }

  GroupSubset operator+(const GroupSubset& o) const {
    GroupSubset s(g_);
    const auto mine = members(), theirs = o.members();
    for (auto x : mine)
      for (auto y : theirs) s.bits_[g_.add(x, y)] = 1;
    return s;
  }
  GroupSubset operator-(const GroupSubset& o) const { return *this + o.negate(); }

  // k-fold sumset kA (with {0} for k = 0).
  GroupSubset multiple(std::size_t k) const {
    GroupSubset s = singleton(g_, 0);
    const bool has_zero = contains(0);
    for (std::size_t i = 0; i < k; ++i) {
      GroupSubset next = s + *this;
      // with 0 present the chain kX is increasing, so a repeat is a fixed point
      if (has_zero && next.size() == s.size()) break;
      s = std::move(next);
    }
    return s;
  }

  nlohmann::json to_json() const { return {{"group", g_.name()}, {"members", members()}}; }
  static GroupSubset from_json(const nlohmann::json& j) {
    try {
      auto g = FiniteGroup::parse(j.at("group").get<std::string>());
      return GroupSubset(g, j.at("members").get<std::vector<std::size_t>>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("subset json: ") + e.what());
    }
  }

  friend bool operator==(const GroupSubset& a, const GroupSubset& b) { return a.g_ == b.g_ && a.bits_ == b.bits_; }

 private:
  FiniteGroup g_;
  std::vector<char> bits_;
};

// Probability measure on a finite group given as a weight table.
class DensityWeight {
 public:
  DensityWeight(FiniteGroup g, std::vector<double> w) : g_(std::move(g)), w_(std::move(w)) {
    if (w_.size() != g_.order()) throw InputError("weight table size mismatch");
    long double s = 0;
    for (double v : w_) {
      if (!(v >= 0)) throw InputError("negative weight");
      s += v;
    }
    if (std::abs(static_cast<double>(s) - 1.0) > 1e-12) throw InputError("weights sum to " + std::to_string(static_cast<double>(s)) + ", not 1");
  }

  static DensityWeight uniform_on(const GroupSubset& a) {
    if (a.empty()) throw InputError("uniform measure on an empty set");
    std::vector<double> w(a.group().order(), 0.0);
    const double m = 1.0 / static_cast<double>(a.size());
    for (auto x : a.members()) w[x] = m;
    return DensityWeight(a.group(), std::move(w));
  }
  static DensityWeight point_mass(const FiniteGroup& g, std::size_t x) {
    std::vector<double> w(g.order(), 0.0);
    w[x] = 1.0;
    return DensityWeight(g, std::move(w));
  }

  const FiniteGroup& group() const { return g_; }
  const std::vector<double>& weights() const { return w_; }
  double operator[](std::size_t x) const { return w_[x]; }

  double measure(const GroupSubset& e) const {
    double s = 0;
    for (auto x : e.members()) s += w_[x];
    return s;
  }

  GroupSubset support(double tol = 0.0) const {
    GroupSubset s(g_);
    for (std::size_t x = 0; x < w_.size(); ++x)
      if (w_[x] > tol) s.insert(x);
    return s;
  }

  // mu~(E) = mu(-E) (real weights).
  DensityWeight reflect() const {
    std::vector<double> w(w_.size());
    for (std::size_t x = 0; x < w_.size(); ++x) w[g_.neg(x)] = w_[x];
    return DensityWeight(g_, std::move(w));
  }

  // (mu * nu)(E) = int 1_E(x + y) dmu(x) dnu(y).
  DensityWeight convolve(const DensityWeight& o) const {
    std::vector<double> w(w_.size(), 0.0);
    for (std::size_t x = 0; x < w_.size(); ++x) {
      if (w_[x] == 0) continue;
      for (std::size_t y = 0; y < w_.size(); ++y)
        if (o.w_[y] != 0) w[g_.add(x, y)] += w_[x] * o.w_[y];
    }
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& v : w) v /= s;
    return DensityWeight(g_, std::move(w));
  }

 private:
  FiniteGroup g_;
  std::vector<double> w_;
};

}  // namespace rado
