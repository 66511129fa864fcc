#pragma once

// Exact lattice invariants of a plumbing graph: the intersection form, the
// anti-dual basis E*_v, the discriminant group H = L'/L, the canonical cycle
// Z_K and the cycle l'_top.

#include "plumbing/graph.hpp"
#include "plumbing/rational.hpp"

#include <compare>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumbing {

/// Rational coordinate vector in the E-basis (vertex declaration order).
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t n) : c_(n, Rational(0)) {}
  explicit LatticeVector(std::vector<Rational> coords) : c_(std::move(coords)) {
    for (auto& x : c_) x.canonicalize();
  }
  LatticeVector(std::initializer_list<long> coords) {
    for (long x : coords) c_.emplace_back(x);
  }

  static LatticeVector unit(std::size_t n, std::size_t v) {
    LatticeVector e(n);
    e.c_.at(v) = 1;
    return e;
  }

  std::size_t size() const noexcept { return c_.size(); }
  const Rational& operator[](std::size_t i) const { return c_[i]; }
  Rational& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Rational>& coords() const noexcept { return c_; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_integral() const {
    for (const auto& x : c_)
      if (!plumbing::is_integral(x)) return false;
    return true;
  }

  LatticeVector& operator+=(const LatticeVector& o) {
    check_size(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  LatticeVector& operator-=(const LatticeVector& o) {
    check_size(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  LatticeVector& operator*=(const Rational& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
  friend LatticeVector operator-(LatticeVector a) { return a *= Rational(-1); }
  friend LatticeVector operator*(const Rational& s, LatticeVector a) { return a *= s; }
  friend LatticeVector operator*(long s, LatticeVector a) { return a *= Rational(s); }

  friend bool operator==(const LatticeVector& a, const LatticeVector& b) { return a.c_ == b.c_; }
  friend bool operator<(const LatticeVector& a, const LatticeVector& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

  /// Coordinates restricted to `coords`, in that order.
  LatticeVector project(std::span<const std::size_t> coords) const {
    LatticeVector p(coords.size());
    for (std::size_t k = 0; k < coords.size(); ++k) p.c_[k] = c_.at(coords[k]);
    return p;
  }

  /// `(c1,...,cn)` with rationals as `p/q`.
  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += plumbing::to_string(c_[i]);
    }
    return s + ")";
  }

 private:
  void check_size(const LatticeVector& o) const {
    if (o.size() != size()) throw std::invalid_argument("lattice vector dimension mismatch");
  }
  std::vector<Rational> c_;
};

/// Zero-padded embedding of live-coordinate values into a full vector.
inline LatticeVector embed(const LatticeVector& projected, std::span<const std::size_t> coords,
                           std::size_t n) {
  if (projected.size() != coords.size()) throw std::invalid_argument("embed: dimension mismatch");
  LatticeVector full(n);
  for (std::size_t k = 0; k < coords.size(); ++k) full[coords[k]] = projected[k];
  return full;
}

/// Element of H = L'/L, stored as its reduced representative r_h with every
/// coordinate in [0,1).
class HClass {
 public:
  HClass() = default;

  /// Reduces any vector to its fractional parts. Membership in L' is the
  /// caller's responsibility; Lattice::class_of checks it.
  static HClass reduce(const LatticeVector& x) {
    std::vector<Rational> r;
    r.reserve(x.size());
    for (const auto& c : x) r.push_back(c - Rational(floor_of(c)));
    HClass h;
    h.rep_ = LatticeVector(std::move(r));
    return h;
  }

  const LatticeVector& rep() const noexcept { return rep_; }
  bool is_zero() const { return rep_.is_zero(); }
  std::string to_string() const { return rep_.to_string(); }

  friend HClass operator+(const HClass& a, const HClass& b) { return reduce(a.rep_ + b.rep_); }
  friend HClass operator-(const HClass& a, const HClass& b) { return reduce(a.rep_ - b.rep_); }
  friend HClass operator-(const HClass& a) { return reduce(-a.rep_); }
  friend HClass operator*(long k, const HClass& a) { return reduce(k * a.rep_); }
  friend bool operator==(const HClass& a, const HClass& b) { return a.rep_ == b.rep_; }
  friend bool operator<(const HClass& a, const HClass& b) { return a.rep_ < b.rep_; }

 private:
  LatticeVector rep_;
};

using IntMatrix = std::vector<std::vector<Integer>>;
using RatMatrix = std::vector<std::vector<Rational>>;

struct IntersectionData {
  IntMatrix form;      // I
  RatMatrix neg_inv;   // -I^{-1}
  Integer h_order;     // det(-I) = |H|
};

namespace detail {

/// Fraction-free Gauss-Jordan (Bareiss/Montante) on [A | Id]. Returns
/// (det A, adj A). Requires non-vanishing leading principal minors.
inline std::pair<Integer, IntMatrix> det_and_adjugate(const IntMatrix& a_in) {
  const std::size_t n = a_in.size();
  IntMatrix a(n, std::vector<Integer>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = a_in[i][j];
    a[i][n + i] = 1;
  }
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) throw std::domain_error("singular leading minor in fraction-free elimination");
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        Integer t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  // every diagonal entry now equals det; the right block is adj(A)
  IntMatrix adj(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = a[i][n + j];
  return {prev, adj};
}

}  // namespace detail

inline IntersectionData intersection_data(const PlumbingGraph& g) {
  IntersectionData d;
  d.form = g.intersection_matrix();
  IntMatrix neg = d.form;
  for (auto& row : neg)
    for (auto& x : row) x = -x;
  auto [det, adj] = detail::det_and_adjugate(neg);
  if (det == 0) throw std::domain_error("intersection matrix is singular");
  d.h_order = det;
  const std::size_t n = g.size();
  d.neg_inv.assign(n, std::vector<Rational>(n));
  // (-I)^{-1} = adj(-I) / det(-I), which is -I^{-1}
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d.neg_inv[i][j] = make_rational(adj[i][j], det);
  return d;
}

/// int64 vector equal to |H| times an element of L'.
using ScaledVec = std::vector<std::int64_t>;

/// Immutable lattice data of a validated plumbing graph.
class Lattice {
 public:
  explicit Lattice(PlumbingGraph g) : graph_(std::move(g)) {
    auto report = validate(graph_);
    if (!report.ok()) {
      std::string msg = "invalid plumbing graph:";
      for (const auto& m : report.messages) msg += " " + m + ";";
      throw std::invalid_argument(msg);
    }
    data_ = intersection_data(graph_);
    classes_ = classify_vertices(graph_);
    scale_ = to_int64(data_.h_order);
    const std::size_t n = graph_.size();
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<Rational> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = data_.neg_inv[i][v];
      e_star_.emplace_back(std::move(col));
      e_star_scaled_.push_back(scaled(e_star_.back()));
    }
    // (Z_K, E_v) = e_v + 2 and (E*_w, E_v) = -delta, so Z_K = -sum (e_v + 2) E*_v
    z_k_ = LatticeVector(n);
    for (std::size_t v = 0; v < n; ++v)
      z_k_ += Rational(-(graph_.vertex(v).euler + 2)) * e_star_[v];
    l_top_ = z_k_ - sum_e();
    for (auto e : classes_.ends) l_top_ += e_star_[e];
  }

  const PlumbingGraph& graph() const noexcept { return graph_; }
  std::size_t rank() const noexcept { return graph_.size(); }
  const IntersectionData& data() const noexcept { return data_; }
  const VertexClasses& vertex_classes() const noexcept { return classes_; }
  const VertexSet& nodes() const noexcept { return classes_.nodes; }
  const VertexSet& ends() const noexcept { return classes_.ends; }
  int valency(std::size_t v) const { return classes_.valency.at(v); }

  /// |H| = det(-I).
  std::int64_t order() const noexcept { return scale_; }

  const LatticeVector& e_star(std::size_t v) const { return e_star_.at(v); }
  const ScaledVec& e_star_scaled(std::size_t v) const { return e_star_scaled_.at(v); }
  LatticeVector e(std::size_t v) const { return LatticeVector::unit(rank(), v); }
  LatticeVector zero() const { return LatticeVector(rank()); }

  /// E = sum of all E_v.
  LatticeVector sum_e() const {
    LatticeVector s(rank());
    for (std::size_t v = 0; v < rank(); ++v) s[v] = 1;
    return s;
  }

  const LatticeVector& canonical_cycle() const noexcept { return z_k_; }
  const LatticeVector& l_top() const noexcept { return l_top_; }

  /// x^T I y.
  Rational pairing(const LatticeVector& x, const LatticeVector& y) const {
    if (x.size() != rank() || y.size() != rank())
      throw std::invalid_argument("pairing: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      Rational row = 0;
      for (std::size_t j = 0; j < rank(); ++j)
        if (data_.form[i][j] != 0) row += Rational(data_.form[i][j]) * y[j];
      s += x[i] * row;
    }
    return s;
  }

  /// x lies in L' iff (x, E_v) is an integer for every v.
  bool in_dual(const LatticeVector& x) const {
    if (x.size() != rank()) return false;
    for (std::size_t v = 0; v < rank(); ++v)
      if (!plumbing::is_integral(pairing(x, e(v)))) return false;
    return true;
  }

  HClass class_of(const LatticeVector& x) const {
    if (!in_dual(x)) throw std::invalid_argument("class_of: vector " + x.to_string() + " is not in L'");
    return HClass::reduce(x);
  }

  /// Class of sum_e x_e E*_e, x indexed by end-vertices in vertex order.
  HClass rho(std::span<const std::int64_t> x) const {
    if (x.size() != ends().size()) throw std::invalid_argument("rho: expected one entry per end-vertex");
    LatticeVector s(rank());
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] < 0) throw std::invalid_argument("rho: negative entry");
      s += Rational(x[k]) * e_star(ends()[k]);
    }
    return HClass::reduce(s);
  }

  /// All |H| classes, sorted by representative (zero class first).
  std::vector<HClass> classes() const {
    std::set<HClass> found{HClass::reduce(zero())};
    std::vector<HClass> frontier(found.begin(), found.end());
    std::vector<HClass> gens;
    for (std::size_t v = 0; v < rank(); ++v) {
      auto g = HClass::reduce(e_star(v));
      if (!g.is_zero()) gens.push_back(g);
    }
    while (!frontier.empty()) {
      std::vector<HClass> next;
      for (const auto& h : frontier)
        for (const auto& g : gens) {
          auto s = h + g;
          if (found.insert(s).second) next.push_back(s);
        }
      frontier = std::move(next);
    }
    if (static_cast<std::int64_t>(found.size()) != order())
      throw std::logic_error("class enumeration does not match det(-I)");
    return {found.begin(), found.end()};
  }

  /// Smallest d >= 1 with d*[x] = 0.
  std::int64_t class_order(const LatticeVector& x) const {
    auto s = scaled(x);
    std::int64_t g = scale_;
    for (auto c : s) g = std::gcd(g, c);
    return scale_ / g;
  }

  ScaledVec scaled(const LatticeVector& x) const {
    if (x.size() != rank()) throw std::invalid_argument("scaled: dimension mismatch");
    ScaledVec out(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      Rational t = x[i] * Rational(scale_);
      if (!plumbing::is_integral(t))
        throw std::invalid_argument("vector " + x.to_string() + " has a denominator not dividing |H|");
      out[i] = to_int64(t.get_num());
    }
    return out;
  }

  LatticeVector unscaled(std::span<const std::int64_t> s) const {
    std::vector<Rational> c;
    c.reserve(s.size());
    for (auto x : s) c.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(scale_))));
    return LatticeVector(std::move(c));
  }

  /// Scaled representative reduced mod |H|, a canonical key for the class.
  ScaledVec class_key(std::span<const std::int64_t> s) const {
    ScaledVec k(s.begin(), s.end());
    for (auto& x : k) x = mod_floor(x, scale_);
    return k;
  }
  ScaledVec class_key(const HClass& h) const { return scaled(h.rep()); }

 private:
  PlumbingGraph graph_;
  IntersectionData data_;
  VertexClasses classes_;
  std::int64_t scale_ = 1;
  std::vector<LatticeVector> e_star_;
  std::vector<ScaledVec> e_star_scaled_;
  LatticeVector z_k_;
  LatticeVector l_top_;
};

/// Parses comma-separated rationals into a vector.
inline LatticeVector parse_vector(std::string_view text) {
  std::vector<Rational> c;
  std::string s(text);
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (true) {
    auto comma = s.find(',', pos);
    auto piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    c.push_back(parse_rational(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return LatticeVector(std::move(c));
}

}  // namespace plumbing
