#pragma once

// The zeta function f(t) = prod_v (1 - t^{E*_v})^{delta_v - 2}, its reductions to
// a subset of variables, equivariant splitting, and truncated expansions at
// the origin and at infinity.
//
// Exponents are kept as int64 vectors scaled by |H| (every L' coordinate has
// denominator dividing |H|). Conversions to LatticeVector happen at the API
// boundary.

#include "plumbing/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumbing {

/// Monotone predicate on scaled exponents. With `upper`, a coordinate passes
/// when x_v <= lim_v, otherwise when x_v >= lim_v; `all` asks every listed
/// coordinate to pass, otherwise one suffices. Growing (resp. shrinking) an
/// exponent can only turn an upper (resp. lower) cut from true to false, which
/// is what the enumerators prune on.
struct ScaledCut {
  VertexSet coords;
  std::vector<std::int64_t> lim;
  bool all = false;
  bool upper = true;

  bool operator()(const ScaledVec& x) const {
    for (std::size_t k = 0; k < coords.size(); ++k) {
      const auto c = x[coords[k]];
      const bool ok = upper ? c <= lim[k] : c >= lim[k];
      if (all && !ok) return false;
      if (!all && ok) return true;
    }
    return all;
  }
};

/// Integer view of H: classes indexed 0..|H|-1 in rep order, plus per-vertex
/// "add [E*_v]" tables for incremental tracking during enumeration.
class HGroup {
 public:
  explicit HGroup(const Lattice& L) : lattice_(&L), classes_(L.classes()) {
    for (std::size_t i = 0; i < classes_.size(); ++i) index_[L.class_key(classes_[i])] = static_cast<int>(i);
    step_.resize(L.rank());
    for (std::size_t v = 0; v < L.rank(); ++v) {
      step_[v].resize(classes_.size());
      for (std::size_t i = 0; i < classes_.size(); ++i)
        step_[v][i] = index_of(classes_[i] + HClass::reduce(L.e_star(v)));
    }
  }

  std::size_t size() const noexcept { return classes_.size(); }
  const HClass& at(int i) const { return classes_.at(static_cast<std::size_t>(i)); }
  const std::vector<HClass>& classes() const noexcept { return classes_; }

  int index_of(const HClass& h) const { return index_of_key(lattice_->class_key(h)); }
  int index_of_key(const ScaledVec& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw std::invalid_argument("not a class of this lattice");
    return it->second;
  }
  /// Class of a scaled L' vector.
  int index_of_scaled(const ScaledVec& s) const { return index_of_key(lattice_->class_key(s)); }
  int step(std::size_t v, int i) const { return step_[v][static_cast<std::size_t>(i)]; }

 private:
  const Lattice* lattice_;
  std::vector<HClass> classes_;
  std::map<ScaledVec, int> index_;
  std::vector<std::vector<int>> step_;
};

/// Multiplicity of the factor (1 - t^{E*_v}) in f.
inline int zeta_multiplicity(const Lattice& L, std::size_t v) { return L.valency(v) - 2; }

/// Coefficient of t^{c E*} in (1 - t^{E*})^m.
inline Coeff factor_coefficient(int m, std::int64_t c) {
  if (c < 0) return 0;
  if (m == 0) return c == 0 ? 1 : 0;
  if (m > 0) {
    if (c > m) return 0;
    Coeff b = binomial(m, c);
    return (c % 2) ? -b : b;
  }
  return binomial(c - m - 1, -m - 1);
}

/// z(l'), the coefficient of t^{l'} in the expansion of f at the origin.
/// Since the E*_v form a basis, l' has the unique E*-coordinates -(l', E_v).
inline Coeff coeff(const Lattice& L, const LatticeVector& l) {
  if (!L.in_dual(l)) throw std::invalid_argument("coeff: " + l.to_string() + " is not in L'");
  Coeff z = 1;
  for (std::size_t v = 0; v < L.rank(); ++v) {
    const auto c = to_int64(-L.pairing(l, L.e(v)).get_num());
    const Coeff f = factor_coefficient(zeta_multiplicity(L, v), c);
    if (f == 0) return 0;
    z = mul_checked(z, f);
  }
  return z;
}

/// Calls fn(s, z(s), class index of s) for every s in the support of Z(t)
/// (scaled coordinates) with cut(s) true. `cut` must be an upper cut, which
/// makes the set finite because every E* entry is positive.
template <class Fn>
void for_each_support_point(const Lattice& L, const HGroup& H, const ScaledCut& cut, Fn&& fn) {
  if (!cut.upper) throw std::invalid_argument("support enumeration needs an upper cut");
  if (cut.coords.empty()) throw std::invalid_argument("support enumeration needs at least one cut coordinate");
  struct Gen {
    std::size_t v;
    int m;
  };
  std::vector<Gen> gens;
  // bounded factors first keeps the unbounded loops innermost
  for (std::size_t v = 0; v < L.rank(); ++v)
    if (zeta_multiplicity(L, v) > 0) gens.push_back({v, zeta_multiplicity(L, v)});
  for (std::size_t v = 0; v < L.rank(); ++v)
    if (zeta_multiplicity(L, v) < 0) gens.push_back({v, zeta_multiplicity(L, v)});

  ScaledVec s(L.rank(), 0);
  if (!cut(s)) return;
  std::function<void(std::size_t, Coeff, int)> rec = [&](std::size_t depth, Coeff z, int cls) {
    if (depth == gens.size()) {
      fn(static_cast<const ScaledVec&>(s), z, cls);
      return;
    }
    const auto& g = gens[depth];
    const auto& e = L.e_star_scaled(g.v);
    std::int64_t c = 0;
    int cur = cls;
    while (true) {
      rec(depth + 1, mul_checked(z, factor_coefficient(g.m, c)), cur);
      if (g.m > 0 && c == g.m) break;
      ++c;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += e[i];
      cur = H.step(g.v, cur);
      if (!cut(s)) break;
    }
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= c * e[i];
  };
  rec(0, 1, H.index_of(HClass::reduce(L.zero())));
}

// ---------------------------------------------------------------------------
// Rational functions

struct Factor {
  LatticeVector exponent;
  int multiplicity = 0;
};

/// prefactor * prod (1 - t^{a})^{m}.
struct FactoredRatFunc {
  std::vector<Factor> factors;
  std::map<LatticeVector, Coeff> prefactor;
};

inline FactoredRatFunc zeta(const Lattice& L) {
  FactoredRatFunc f;
  f.prefactor[L.zero()] = 1;
  for (std::size_t v = 0; v < L.rank(); ++v) {
    const int m = zeta_multiplicity(L, v);
    if (m != 0) f.factors.push_back({L.e_star(v), m});
  }
  return f;
}

/// sum_b c_b t^b / prod_i (1 - t^{a_i}), exponents scaled by |H| and kept at
/// full length; only the `active` coordinates are live.
struct RatFunc {
  std::int64_t scale = 1;
  std::map<ScaledVec, Coeff> numerator;
  std::vector<ScaledVec> denominator;
  VertexSet active;
  std::optional<HClass> tag;

  bool is_zero() const { return numerator.empty(); }
};

inline ScaledVec project(const ScaledVec& x, const VertexSet& coords) {
  ScaledVec p(coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) p[k] = x[coords[k]];
  return p;
}

inline ScaledVec embed(const ScaledVec& p, const VertexSet& coords, std::size_t n) {
  ScaledVec x(n, 0);
  for (std::size_t k = 0; k < coords.size(); ++k) x[coords[k]] = p[k];
  return x;
}

inline void add_term(std::map<ScaledVec, Coeff>& m, const ScaledVec& e, Coeff c) {
  if (c == 0) return;
  auto [it, fresh] = m.try_emplace(e, c);
  if (!fresh) {
    it->second = add_checked(it->second, c);
    if (it->second == 0) m.erase(it);
  }
}

inline ScaledVec vec_add(const ScaledVec& a, const ScaledVec& b) {
  ScaledVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_checked(a[i], b[i]);
  return r;
}
inline ScaledVec vec_sub(const ScaledVec& a, const ScaledVec& b) {
  ScaledVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub_checked(a[i], b[i]);
  return r;
}
inline ScaledVec vec_scale(std::int64_t k, const ScaledVec& a) {
  ScaledVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_checked(k, a[i]);
  return r;
}

/// a < b on every listed coordinate.
inline bool strictly_below(const ScaledVec& a, const ScaledVec& b, const VertexSet& coords) {
  for (auto v : coords)
    if (!(a[v] < b[v])) return false;
  return true;
}

inline std::map<ScaledVec, Coeff> poly_mul(const std::map<ScaledVec, Coeff>& a, const std::map<ScaledVec, Coeff>& b) {
  std::map<ScaledVec, Coeff> r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) add_term(r, vec_add(ea, eb), mul_checked(ca, cb));
  return r;
}

/// Numerator/denominator form on the live coordinates I: positive factors are
/// multiplied out, negative ones become repeated denominator entries.
inline RatFunc reduce(const Lattice& L, const FactoredRatFunc& F, const VertexSet& I) {
  if (I.empty()) throw std::invalid_argument("reduce: empty variable set");
  for (auto v : I)
    if (v >= L.rank()) throw std::invalid_argument("reduce: vertex index out of range");
  RatFunc R;
  R.scale = L.order();
  R.active = I;
  for (const auto& [e, c] : F.prefactor) add_term(R.numerator, L.scaled(e), c);
  for (const auto& f : F.factors) {
    const auto a = L.scaled(f.exponent);
    for (auto v : I)
      if (a[v] <= 0) throw std::domain_error("reduce: factor exponent not positive on live coordinates");
    if (f.multiplicity > 0) {
      std::map<ScaledVec, Coeff> p;
      for (int c = 0; c <= f.multiplicity; ++c)
        add_term(p, vec_scale(c, a), factor_coefficient(f.multiplicity, c));
      R.numerator = poly_mul(R.numerator, p);
    } else {
      for (int k = 0; k < -f.multiplicity; ++k) R.denominator.push_back(a);
    }
  }
  for (const auto& [b, c] : R.numerator) {
    bool some_nonneg = false;
    for (auto v : I) some_nonneg |= b[v] >= 0;
    if (!some_nonneg) throw std::domain_error("reduce: numerator exponent below zero on all live coordinates");
  }
  return R;
}

/// Makes every denominator exponent L-integral and splits the numerator by
/// the class of its exponents. Every class of H gets an entry, possibly zero.
inline std::map<HClass, RatFunc> equivariant_split(const Lattice& L, const RatFunc& R) {
  if (R.tag) throw std::invalid_argument("equivariant_split: input is already tagged");
  std::map<ScaledVec, Coeff> num = R.numerator;
  std::vector<ScaledVec> den;
  for (const auto& a : R.denominator) {
    const auto d = L.class_order(L.unscaled(a));
    std::map<ScaledVec, Coeff> geo;
    for (std::int64_t j = 0; j < d; ++j) add_term(geo, vec_scale(j, a), 1);
    num = poly_mul(num, geo);
    den.push_back(vec_scale(d, a));
  }
  std::map<HClass, RatFunc> out;
  for (const auto& h : L.classes()) {
    RatFunc part;
    part.scale = R.scale;
    part.denominator = den;
    part.active = R.active;
    part.tag = h;
    out.emplace(h, std::move(part));
  }
  for (const auto& [b, c] : num) {
    auto h = HClass::reduce(L.unscaled(b));
    add_term(out.at(h).numerator, b, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Windows and truncated series

enum class WindowKind { BelowAll, BelowSome, AboveAll, AboveSome };
enum class ExpansionPoint { Origin, Infinity };

/// Set of exponents l (on `coords`) with l_v <= b_v (Below) or l_v >= b_v
/// (Above), for all or for some v; `strict` makes the inequalities strict.
/// `bound` is indexed like `coords`.
struct Window {
  WindowKind kind = WindowKind::BelowAll;
  bool strict = false;
  VertexSet coords;
  LatticeVector bound;

  static Window box(const VertexSet& coords, long b) {
    return {WindowKind::BelowAll, false, coords, LatticeVector(std::vector<Rational>(coords.size(), Rational(b)))};
  }

  bool below() const { return kind == WindowKind::BelowAll || kind == WindowKind::BelowSome; }
  bool for_all() const { return kind == WindowKind::BelowAll || kind == WindowKind::AboveAll; }

  /// Scaled cut over full-length vectors.
  ScaledCut cut(std::int64_t scale) const {
    if (bound.size() != coords.size()) throw std::invalid_argument("window bound has the wrong dimension");
    ScaledCut c{coords, {}, for_all(), below()};
    for (const auto& b : bound) {
      const Rational t = b * Rational(scale);
      std::int64_t lim;
      if (below()) lim = strict ? to_int64(ceil_of(t)) - 1 : to_int64(floor_of(t));
      else lim = strict ? to_int64(floor_of(t)) + 1 : to_int64(ceil_of(t));
      c.lim.push_back(lim);
    }
    return c;
  }

  /// Membership of a projected (length |coords|) exponent.
  bool contains(const LatticeVector& e) const {
    if (e.size() != coords.size()) throw std::invalid_argument("window: exponent has the wrong dimension");
    for (std::size_t k = 0; k < coords.size(); ++k) {
      bool ok;
      if (below()) ok = strict ? e[k] < bound[k] : e[k] <= bound[k];
      else ok = strict ? e[k] > bound[k] : e[k] >= bound[k];
      if (for_all() && !ok) return false;
      if (!for_all() && ok) return true;
    }
    return for_all();
  }

  std::string describe() const {
    static const char* names[] = {"below-all", "below-some", "above-all", "above-some"};
    return std::string(names[static_cast<int>(kind)]) + (strict ? " strict " : " ") + bound.to_string();
  }
};

/// Exact finite piece of an expansion: complete for `window`, nothing outside.
class TruncatedSeries {
 public:
  TruncatedSeries(Window w, ExpansionPoint p, std::int64_t scale, std::optional<HClass> tag = std::nullopt)
      : window_(std::move(w)), point_(p), scale_(scale), tag_(std::move(tag)) {}

  const Window& window() const noexcept { return window_; }
  ExpansionPoint point() const noexcept { return point_; }
  const std::optional<HClass>& tag() const noexcept { return tag_; }
  std::int64_t scale() const noexcept { return scale_; }
  /// Projected scaled exponent -> coefficient, zero terms omitted.
  const std::map<ScaledVec, Coeff>& terms() const noexcept { return terms_; }
  std::map<ScaledVec, Coeff>& mutable_terms() noexcept { return terms_; }

  void add(const ScaledVec& projected, Coeff c) { add_term(terms_, projected, c); }

  LatticeVector exponent(const ScaledVec& projected) const {
    std::vector<Rational> c;
    for (auto x : projected) c.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(scale_))));
    return LatticeVector(std::move(c));
  }

  /// Coefficient at a projected exponent; throws outside the window.
  Coeff at(const LatticeVector& e) const {
    if (!window_.contains(e))
      throw std::out_of_range("exponent " + e.to_string() + " lies outside the window " + window_.describe());
    ScaledVec key;
    for (const auto& c : e) {
      Rational t = c * Rational(scale_);
      if (!is_integral(t)) return 0;
      key.push_back(to_int64(t.get_num()));
    }
    auto it = terms_.find(key);
    return it == terms_.end() ? 0 : it->second;
  }

  Coeff sum() const {
    Coeff s = 0;
    for (const auto& [e, c] : terms_) s = add_checked(s, c);
    return s;
  }

  /// `coeff * t^(vector)` lines sorted by exponent.
  std::string to_string() const {
    std::vector<std::pair<LatticeVector, Coeff>> rows;
    for (const auto& [e, c] : terms_) rows.emplace_back(exponent(e), c);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    for (const auto& [e, c] : rows) os << c << " * t^" << e.to_string() << "\n";
    return os.str();
  }

 private:
  Window window_;
  ExpansionPoint point_;
  std::int64_t scale_;
  std::optional<HClass> tag_;
  std::map<ScaledVec, Coeff> terms_;
};

namespace detail {

inline void require_window(const Window& w, bool want_below, const char* where) {
  if (w.below() != want_below) throw std::invalid_argument(std::string(where) + ": window " + w.describe() + " is unbounded for this expansion");
  if (w.coords.empty()) throw std::invalid_argument(std::string(where) + ": window has no coordinates");
}

/// Walks b + sum_i n_i * step_i (n_i >= first) while `cut` holds, calling fn on
/// each point together with the multiplicities' sign bookkeeping left to fn.
template <class Fn>
void walk_geometric(ScaledVec& x, const std::vector<ScaledVec>& steps, std::int64_t first, bool forward,
                    const ScaledCut& cut, Fn&& fn, std::size_t depth = 0) {
  if (depth == steps.size()) {
    fn(static_cast<const ScaledVec&>(x));
    return;
  }
  const auto& a = steps[depth];
  const std::int64_t sign = forward ? 1 : -1;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += sign * first * a[i];
  std::int64_t n = first;
  while (cut(x)) {
    walk_geometric(x, steps, first, forward, cut, fn, depth + 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += sign * a[i];
    ++n;
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= sign * n * a[i];
}

}  // namespace detail

/// Expansion of R at the origin on a Below window over R's live coordinates.
inline TruncatedSeries taylor(const RatFunc& R, const Window& w) {
  detail::require_window(w, true, "taylor");
  if (w.coords != R.active) throw std::invalid_argument("taylor: window coordinates must be the live coordinates");
  for (const auto& a : R.denominator)
    for (auto v : R.active)
      if (a[v] <= 0) throw std::domain_error("taylor: denominator exponent not positive on live coordinates");
  const auto cut = w.cut(R.scale);
  TruncatedSeries out(w, ExpansionPoint::Origin, R.scale, R.tag);
  for (const auto& [b, c] : R.numerator) {
    ScaledVec x = b;
    const Coeff coef = c;
    detail::walk_geometric(x, R.denominator, 0, true, cut,
                           [&](const ScaledVec& e) { out.add(project(e, w.coords), coef); });
  }
  return out;
}

/// Expansion at infinity via 1/(1 - t^a) = -sum_{n>=1} t^{-na}, on an Above
/// window over the live coordinates.
inline TruncatedSeries taylor_infinity(const RatFunc& R, const Window& w) {
  detail::require_window(w, false, "taylor_infinity");
  if (w.coords != R.active) throw std::invalid_argument("taylor_infinity: window coordinates must be the live coordinates");
  const auto cut = w.cut(R.scale);
  TruncatedSeries out(w, ExpansionPoint::Infinity, R.scale, R.tag);
  const Coeff sign = (R.denominator.size() % 2) ? -1 : 1;
  for (const auto& [b, c] : R.numerator) {
    ScaledVec x = b;
    const Coeff coef = sign * c;
    detail::walk_geometric(x, R.denominator, 1, false, cut,
                           [&](const ScaledVec& e) { out.add(project(e, w.coords), coef); });
  }
  return out;
}

/// Expansion of a factored function at the origin by multiplying truncated
/// factor series; window coordinates may be any non-empty vertex subset.
inline TruncatedSeries taylor(const Lattice& L, const FactoredRatFunc& F, const Window& w) {
  detail::require_window(w, true, "taylor");
  const auto cut = w.cut(L.order());
  TruncatedSeries out(w, ExpansionPoint::Origin, L.order());
  std::vector<std::pair<ScaledVec, int>> fs;
  for (const auto& f : F.factors) {
    auto a = L.scaled(f.exponent);
    for (auto v : w.coords)
      if (a[v] <= 0) throw std::domain_error("taylor: factor exponent not positive on window coordinates");
    fs.emplace_back(std::move(a), f.multiplicity);
  }
  std::function<void(ScaledVec&, std::size_t, Coeff)> rec = [&](ScaledVec& x, std::size_t depth, Coeff z) {
    if (depth == fs.size()) {
      out.add(project(x, w.coords), z);
      return;
    }
    const auto& [a, m] = fs[depth];
    std::int64_t c = 0;
    while (cut(x)) {
      rec(x, depth + 1, mul_checked(z, factor_coefficient(m, c)));
      if (m > 0 && c == m) break;
      ++c;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += a[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * a[i];
  };
  for (const auto& [b, c] : F.prefactor) {
    auto x = L.scaled(b);
    rec(x, 0, c);
  }
  return out;
}

/// Closed form of the expansion of f_h(t_I) at infinity: the coefficient of
/// t^{Z_K - E - s} is z(s), over s with [s] = [Z_K] - h. Without h, all classes.
inline TruncatedSeries taylor_infinity_closed(const Lattice& L, const HGroup& H, const Window& w,
                                              const std::optional<HClass>& h = std::nullopt) {
  detail::require_window(w, false, "taylor_infinity_closed");
  const auto shift = L.scaled(L.canonical_cycle() - L.sum_e());
  // (Z_K - E - s)_v >= b_v  <=>  s_v <= (Z_K - E)_v - b_v
  auto wc = w.cut(L.order());
  ScaledCut scut{w.coords, {}, wc.all, true};
  for (std::size_t k = 0; k < w.coords.size(); ++k) scut.lim.push_back(shift[w.coords[k]] - wc.lim[k]);
  std::optional<int> want;
  if (h) want = H.index_of(HClass::reduce(L.canonical_cycle()) - *h);
  TruncatedSeries out(w, ExpansionPoint::Infinity, L.order(), h);
  for_each_support_point(L, H, scut, [&](const ScaledVec& s, Coeff z, int cls) {
    if (want && cls != *want) return;
    out.add(project(vec_sub(shift, s), w.coords), z);
  });
  return out;
}

/// Expansion of Z_h(t_I) at the origin from the closed-form coefficients.
inline TruncatedSeries taylor_closed(const Lattice& L, const HGroup& H, const Window& w,
                                     const std::optional<HClass>& h = std::nullopt) {
  detail::require_window(w, true, "taylor_closed");
  std::optional<int> want;
  if (h) want = H.index_of(*h);
  TruncatedSeries out(w, ExpansionPoint::Origin, L.order(), h);
  for_each_support_point(L, H, w.cut(L.order()), [&](const ScaledVec& s, Coeff z, int cls) {
    if (want && cls != *want) return;
    out.add(project(s, w.coords), z);
  });
  return out;
}

/// Human-readable rational function on the live coordinates.
inline std::string to_string(const Lattice& L, const RatFunc& R) {
  auto proj = [&](const ScaledVec& e) { return L.unscaled(project(e, R.active)).to_string(); };
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (const auto& [b, c] : R.numerator) {
    os << (first ? "" : " + ") << c << "*t^" << proj(b);
    first = false;
  }
  if (first) os << "0";
  os << ")";
  if (!R.denominator.empty()) {
    os << " / (";
    for (std::size_t i = 0; i < R.denominator.size(); ++i)
      os << "(1-t^" << proj(R.denominator[i]) << ")";
    os << ")";
  }
  return os.str();
}

}  // namespace plumbing
