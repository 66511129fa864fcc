#pragma once

// Counting functions of the equivariant series Z_h:
//   Q_{h,I}(x) = sum of z(l') over [l'] = h with l'_v < x_v for SOME v in I,
//   q_{h,I}(x) = the same with l'_v < x_v for ALL v in I.

#include "plumbing/series.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace plumbing {

enum class CountKind { Counting, Modified };

struct CountQuery {
  HClass h;
  VertexSet I;
  LatticeVector x;
  CountKind kind = CountKind::Counting;
};

namespace detail {

inline void check_query(const Lattice& L, const HClass& h, const VertexSet& I, const LatticeVector& x) {
  if (I.empty()) throw std::invalid_argument("counting: empty coordinate set");
  for (auto v : I)
    if (v >= L.rank()) throw std::invalid_argument("counting: vertex index out of range");
  if (L.class_of(x) != h)
    throw std::invalid_argument("counting: class mismatch, [x] = " + L.class_of(x).to_string() + " but h = " + h.to_string());
}

inline ScaledCut open_cut(const Lattice& L, const VertexSet& I, const LatticeVector& x, bool all) {
  ScaledCut cut{I, {}, all, true};
  for (auto v : I) cut.lim.push_back(to_int64(ceil_of(x[v] * Rational(L.order()))) - 1);
  return cut;
}

inline Coeff count_impl(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I,
                        const LatticeVector& x, bool all) {
  check_query(L, h, I, x);
  const int want = H.index_of(h);
  Coeff total = 0;
  for_each_support_point(L, H, open_cut(L, I, x, all), [&](const ScaledVec&, Coeff z, int cls) {
    if (cls == want) total = add_checked(total, z);
  });
  return total;
}

}  // namespace detail

inline Coeff count_Q(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I, const LatticeVector& x) {
  return detail::count_impl(L, H, h, I, x, false);
}

inline Coeff count_q(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I, const LatticeVector& x) {
  return detail::count_impl(L, H, h, I, x, true);
}

inline Coeff count(const Lattice& L, const HGroup& H, const CountQuery& q) {
  return q.kind == CountKind::Counting ? count_Q(L, H, q.h, q.I, q.x) : count_q(L, H, q.h, q.I, q.x);
}

/// Q_{h,I}(x) = sum over non-empty J in I of (-1)^{|J|+1} q_{h,J}(x).
inline bool inclusion_exclusion_check(const Lattice& L, const HGroup& H, const HClass& h, const VertexSet& I,
                                      const LatticeVector& x) {
  if (I.size() >= 31) throw std::invalid_argument("inclusion_exclusion_check: coordinate set too large");
  const Coeff lhs = count_Q(L, H, h, I, x);
  Coeff rhs = 0;
  for (std::uint32_t mask = 1; mask < (1u << I.size()); ++mask) {
    VertexSet J;
    for (std::size_t k = 0; k < I.size(); ++k)
      if (mask & (1u << k)) J.push_back(I[k]);
    const Coeff q = count_q(L, H, h, J, x);
    rhs = add_checked(rhs, (std::popcount(mask) % 2) ? q : -q);
  }
  return lhs == rhs;
}

/// Upper bound for the E*-multiplicity sum of any l' counted by Q_{h,I}(x):
/// max over v in I of ceil(x_v / smallest E* entry).
inline std::int64_t enumeration_bound(const Lattice& L, const VertexSet& I, const LatticeVector& x) {
  Rational min_entry = L.e_star(0)[0];
  for (std::size_t w = 0; w < L.rank(); ++w)
    for (const auto& c : L.e_star(w)) min_entry = std::min(min_entry, c);
  std::int64_t b = 0;
  for (auto v : I) b = std::max(b, to_int64(ceil_of(x[v] / min_entry)));
  return b;
}

/// E*-multiplicity sum of l' in the Lipman cone: sum_v -(l', E_v).
inline std::int64_t multiplicity_sum(const Lattice& L, const LatticeVector& l) {
  Rational s = 0;
  for (std::size_t v = 0; v < L.rank(); ++v) s -= L.pairing(l, L.e(v));
  return to_int64(s.get_num());
}

}  // namespace plumbing
