#pragma once

// Polynomial part / negative degree part decomposition of f_h(t_I), both by
// multivariable Euclidean division and by the duality formula
//   P+_{h,I}(t) = sum of z(s) t^{Z_K - E - s} over [s] = [Z_K] - h, s not > Z_K - E on I.

#include "plumbing/series.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace plumbing {

using TermMap = std::map<ScaledVec, Coeff>;

/// Exponents of poly_part and by_subset are projected to `active` (scaled).
/// by_subset[S] holds the numerator over prod_{i in S} (1 - t^{a_i}), S a
/// bitmask into `denominator`; S = 0 is the polynomial part itself.
struct Decomposition {
  VertexSet active;
  std::int64_t scale = 1;
  std::optional<HClass> tag;
  std::vector<ScaledVec> denominator;
  TermMap poly_part;
  std::map<std::uint32_t, TermMap> by_subset;
  /// Zero-padded full-length form of the negative degree part, when known.
  std::optional<RatFunc> neg_part;
};

namespace detail {

/// b not < 0 on every coordinate.
inline bool not_below_zero(const ScaledVec& b) {
  for (auto x : b)
    if (x >= 0) return true;
  return false;
}

/// b < a on every coordinate.
inline bool all_below(const ScaledVec& b, const ScaledVec& a) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] >= a[i]) return false;
  return true;
}

inline std::int64_t measure(const ScaledVec& b) {
  std::int64_t m = 0;
  for (auto x : b) m = add_checked(m, std::max<std::int64_t>(x, 0));
  return m;
}

/// Full-length RatFunc from projected data.
inline RatFunc assemble(const Decomposition& d, std::size_t n) {
  RatFunc R;
  R.scale = d.scale;
  R.active = d.active;
  R.tag = d.tag;
  for (const auto& a : d.denominator) R.denominator.push_back(embed(a, d.active, n));
  for (const auto& [mask, terms] : d.by_subset) {
    if (mask == 0) continue;
    TermMap num;
    for (const auto& [b, c] : terms) add_term(num, embed(b, d.active, n), c);
    for (std::size_t i = 0; i < d.denominator.size(); ++i) {
      if (mask & (1u << i)) continue;
      TermMap f;
      add_term(f, ScaledVec(n, 0), 1);
      add_term(f, R.denominator[i], -1);
      num = poly_mul(num, f);
    }
    for (const auto& [b, c] : num) add_term(R.numerator, b, c);
  }
  return R;
}

}  // namespace detail

/// Rewrites t^b / prod_S until b < a_i on the live coordinates for every i in
/// S, using t^b/prod_S = -t^{b-a}/prod_{S-i} + t^{b-a}/prod_S. Terms are taken
/// in decreasing sum of positive parts, which every rewrite strictly lowers, so
/// each (S, b) is settled exactly once.
inline Decomposition euclid_divide(const RatFunc& R) {
  if (R.denominator.size() >= 31) throw std::invalid_argument("euclid_divide: too many denominator factors");
  Decomposition d;
  d.active = R.active;
  d.scale = R.scale;
  d.tag = R.tag;
  for (const auto& a : R.denominator) {
    auto p = project(a, R.active);
    for (auto x : p)
      if (x <= 0) throw std::domain_error("euclid_divide: denominator exponent not positive on live coordinates");
    d.denominator.push_back(std::move(p));
  }
  using Key = std::tuple<std::int64_t, std::uint32_t, ScaledVec>;
  std::map<Key, Coeff> work;
  auto push = [&](std::uint32_t mask, ScaledVec b, Coeff c) {
    if (c == 0) return;
    Key k{detail::measure(b), mask, std::move(b)};
    auto [it, fresh] = work.try_emplace(std::move(k), c);
    if (!fresh) {
      it->second = add_checked(it->second, c);
      if (it->second == 0) work.erase(it);
    }
  };
  const std::uint32_t all = R.denominator.empty() ? 0u : ((1u << R.denominator.size()) - 1);
  for (const auto& [b, c] : R.numerator) {
    auto p = project(b, R.active);
    if (!detail::not_below_zero(p))
      throw std::domain_error("euclid_divide: numerator exponent below zero on all live coordinates");
    push(all, std::move(p), c);
  }
  while (!work.empty()) {
    auto it = std::prev(work.end());
    auto [m, mask, b] = it->first;
    const Coeff c = it->second;
    work.erase(it);
    int i0 = -1;
    for (std::size_t i = 0; i < d.denominator.size(); ++i)
      if ((mask & (1u << i)) && !detail::all_below(b, d.denominator[i])) {
        i0 = static_cast<int>(i);
        break;
      }
    if (i0 < 0) {
      add_term(d.by_subset[mask], b, c);
      continue;
    }
    auto nb = vec_sub(b, d.denominator[static_cast<std::size_t>(i0)]);
    push(mask & ~(1u << i0), nb, -c);
    push(mask, std::move(nb), c);
  }
  for (auto it = d.by_subset.begin(); it != d.by_subset.end();)
    it = it->second.empty() ? d.by_subset.erase(it) : std::next(it);
  if (auto it = d.by_subset.find(0); it != d.by_subset.end()) d.poly_part = it->second;
  std::size_t n = 0;
  if (!R.numerator.empty()) n = R.numerator.begin()->first.size();
  else if (!R.denominator.empty()) n = R.denominator.front().size();
  d.neg_part = detail::assemble(d, n);
  return d;
}

/// Side conditions of the division certificate: every exponent is not below
/// zero, and for S non-empty each b lies strictly below every a_i, i in S.
inline bool certificate_valid(const Decomposition& d) {
  for (const auto& [mask, terms] : d.by_subset)
    for (const auto& [b, c] : terms) {
      if (!detail::not_below_zero(b)) return false;
      for (std::size_t i = 0; i < d.denominator.size(); ++i)
        if ((mask & (1u << i)) && !detail::all_below(b, d.denominator[i])) return false;
    }
  auto it = d.by_subset.find(0);
  return it == d.by_subset.end() ? d.poly_part.empty() : it->second == d.poly_part;
}

/// Negative degree in every live variable: max numerator degree below the
/// total denominator degree, coordinate by coordinate.
inline bool negative_degree(const RatFunc& R) {
  for (auto v : R.active) {
    std::int64_t den = 0;
    for (const auto& a : R.denominator) den = add_checked(den, a[v]);
    for (const auto& [b, c] : R.numerator)
      if (b[v] >= den) return false;
  }
  return true;
}

/// z(s) t^{Z_K - E - s} over s with [s] = [Z_K] - h and s_v <= (Z_K - E)_v for
/// some v in I; exponents projected to I and scaled.
inline TermMap polypart_dual_terms(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I) {
  if (I.empty()) throw std::invalid_argument("polypart_dual: empty variable set");
  const auto shift = L.scaled(L.canonical_cycle() - L.sum_e());
  ScaledCut cut{I, {}, false, true};
  for (auto v : I) cut.lim.push_back(shift[v]);
  const int want = H.index_of(HClass::reduce(L.canonical_cycle()) - h);
  TermMap out;
  for_each_support_point(L, H, cut, [&](const ScaledVec& s, Coeff z, int cls) {
    if (cls == want) add_term(out, project(vec_sub(shift, s), I), z);
  });
  return out;
}

/// P-check+_{h,I}: the same s, with exponent s itself.
inline TermMap dual_polypart(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I) {
  if (I.empty()) throw std::invalid_argument("dual_polypart: empty variable set");
  const auto shift = L.scaled(L.canonical_cycle() - L.sum_e());
  ScaledCut cut{I, {}, false, true};
  for (auto v : I) cut.lim.push_back(shift[v]);
  const int want = H.index_of(HClass::reduce(L.canonical_cycle()) - h);
  TermMap out;
  for_each_support_point(L, H, cut, [&](const ScaledVec& s, Coeff z, int cls) {
    if (cls == want) add_term(out, project(s, I), z);
  });
  return out;
}

/// P+(t) = t^{Z_K - E} * P-check+(t^{-1}), term by term.
inline bool dual_relation_holds(const Lattice& L, const VertexSet& I, const TermMap& p_plus, const TermMap& p_check) {
  if (p_plus.size() != p_check.size()) return false;
  const auto shift = project(L.scaled(L.canonical_cycle() - L.sum_e()), I);
  for (const auto& [e, c] : p_check) {
    auto it = p_plus.find(vec_sub(shift, e));
    if (it == p_plus.end() || it->second != c) return false;
  }
  return true;
}

/// f_h(t_I) as a tagged RatFunc: reduce the zeta function to I and keep the
/// h-part of its equivariant split.
inline RatFunc zeta_part(const Lattice& L, const HClass& h, const VertexSet& I) {
  auto parts = equivariant_split(L, reduce(L, zeta(L), I));
  return parts.at(h);
}

/// Duality construction. With `with_neg_part`, also forms f_h - P+ from the
/// split reduction (numerator minus P+ times the denominator product).
inline Decomposition polypart_dual(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I,
                                   bool with_neg_part = true) {
  Decomposition d;
  d.active = I;
  d.scale = L.order();
  d.tag = h;
  d.poly_part = polypart_dual_terms(L, H, h, I);
  if (!with_neg_part) return d;
  const auto R = zeta_part(L, h, I);
  for (const auto& a : R.denominator) d.denominator.push_back(project(a, I));
  RatFunc neg;
  neg.scale = R.scale;
  neg.active = I;
  neg.tag = h;
  const std::size_t n = L.rank();
  for (const auto& a : d.denominator) neg.denominator.push_back(embed(a, I, n));
  for (const auto& [b, c] : R.numerator) add_term(neg.numerator, embed(project(b, I), I, n), c);
  TermMap p;
  for (const auto& [e, c] : d.poly_part) add_term(p, embed(e, I, n), c);
  for (const auto& a : neg.denominator) {
    TermMap f;
    add_term(f, ScaledVec(n, 0), 1);
    add_term(f, a, -1);
    p = poly_mul(p, f);
  }
  for (const auto& [e, c] : p) add_term(neg.numerator, e, -c);
  d.neg_part = std::move(neg);
  return d;
}

inline Coeff evaluate_at_one(const TermMap& poly) {
  Coeff s = 0;
  for (const auto& [e, c] : poly) s = add_checked(s, c);
  return s;
}

inline std::string terms_to_string(const TermMap& terms, std::int64_t scale) {
  if (terms.empty()) return "0";
  std::vector<std::pair<LatticeVector, Coeff>> rows;
  for (const auto& [e, c] : terms) {
    std::vector<Rational> v;
    for (auto x : e) v.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(scale))));
    rows.emplace_back(LatticeVector(std::move(v)), c);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [e, c] = rows[i];
    if (i) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const Coeff a = c < 0 ? -c : c;
    os << a << "*t^" << e.to_string();
  }
  return os.str();
}

/// `P+ = ...` followed by one `S={...}: ...` line per non-empty S.
inline std::string to_string(const Decomposition& d) {
  std::ostringstream os;
  os << "P+ = " << terms_to_string(d.poly_part, d.scale) << "\n";
  for (const auto& [mask, terms] : d.by_subset) {
    if (mask == 0) continue;
    os << "S={";
    bool first = true;
    for (std::size_t i = 0; i < d.denominator.size(); ++i)
      if (mask & (1u << i)) {
        std::vector<Rational> v;
        for (auto x : d.denominator[i]) v.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(d.scale))));
        os << (first ? "" : ",") << LatticeVector(std::move(v)).to_string();
        first = false;
      }
    os << "}: " << terms_to_string(terms, d.scale) << "\n";
  }
  return os.str();
}

}  // namespace plumbing
