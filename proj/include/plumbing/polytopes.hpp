#pragma once

// Dilated polytopes over the end-vertex coordinates x = (x_e), e an end:
//   P_v(l')       = { x >= 0 : l_v(x) <= l'_v },  l_v(x) = sum_e x_e (E*_e)_v,
//   convex P_I    = intersection of P_v over v in I,
//   concave ~P_I  = union of P_v over v in I,
// and the inclusion-exclusion lattice point formula for -sw^norm_h.

#include "plumbing/series.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumbing {

enum class Shape { Convex, Concave };
/// Closed, or with the non-coordinate facets removed (strict inequalities).
enum class Boundary { Closed, DropFacets };
enum class Positivity { NonNegative, StrictlyPositive };

struct PolytopeQuery {
  Shape shape = Shape::Concave;
  VertexSet I;
  LatticeVector dilation;
  Boundary boundary = Boundary::Closed;
  Positivity positivity = Positivity::StrictlyPositive;
  std::optional<HClass> fiber;
};

/// l_v(x) for x indexed by the end-vertices in vertex order.
inline Rational linear_form(const Lattice& L, std::size_t v, const std::vector<std::int64_t>& x) {
  const auto& ends = L.ends();
  if (x.size() != ends.size()) throw std::invalid_argument("linear_form: expected one entry per end-vertex");
  if (v >= L.rank()) throw std::invalid_argument("linear_form: vertex index out of range");
  Rational s = 0;
  for (std::size_t k = 0; k < ends.size(); ++k) s += Rational(x[k]) * L.e_star(ends[k])[v];
  return s;
}

/// Coefficient tuple of l_v, in end order.
inline LatticeVector linear_form_coefficients(const Lattice& L, std::size_t v) {
  std::vector<Rational> c;
  for (auto e : L.ends()) c.push_back(L.e_star(e)[v]);
  return LatticeVector(std::move(c));
}

namespace detail {

inline ScaledCut polytope_cut(const Lattice& L, const PolytopeQuery& q) {
  if (q.I.empty()) throw std::invalid_argument("polytope query: empty vertex set");
  if (q.dilation.size() != L.rank()) throw std::invalid_argument("polytope query: dilation has the wrong dimension");
  ScaledCut cut{q.I, {}, q.shape == Shape::Convex, true};
  for (auto v : q.I) {
    if (v >= L.rank()) throw std::invalid_argument("polytope query: vertex index out of range");
    const Rational t = q.dilation[v] * Rational(L.order());
    cut.lim.push_back(q.boundary == Boundary::Closed ? to_int64(floor_of(t)) : to_int64(ceil_of(t)) - 1);
  }
  return cut;
}

}  // namespace detail

/// Calls fn(x) for every lattice point of the query region. The region is
/// finite: every E*_e has positive entries, so each l_v grows with every x_e.
template <class Fn>
void for_each_polytope_point(const Lattice& L, const HGroup& H, const PolytopeQuery& q, Fn&& fn) {
  const auto cut = detail::polytope_cut(L, q);
  const auto& ends = L.ends();
  const std::int64_t first = q.positivity == Positivity::StrictlyPositive ? 1 : 0;
  std::optional<int> want;
  if (q.fiber) want = H.index_of(*q.fiber);

  std::vector<std::int64_t> x(ends.size(), first);
  ScaledVec s(L.rank(), 0);
  int cls = H.index_of(HClass::reduce(L.zero()));
  for (auto e : ends)
    for (std::int64_t j = 0; j < first; ++j) {
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += L.e_star_scaled(e)[i];
      cls = H.step(e, cls);
    }
  if (!cut(s)) return;
  std::function<void(std::size_t, int)> rec = [&](std::size_t depth, int c) {
    if (depth == ends.size()) {
      if (!want || *want == c) fn(static_cast<const std::vector<std::int64_t>&>(x));
      return;
    }
    const auto e = ends[depth];
    const auto& a = L.e_star_scaled(e);
    std::int64_t added = 0;
    int cur = c;
    while (true) {
      rec(depth + 1, cur);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += a[i];
      ++added;
      ++x[depth];
      cur = H.step(e, cur);
      if (!cut(s)) break;
    }
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= added * a[i];
    x[depth] -= added;
  };
  rec(0, cls);
}

inline std::int64_t count(const Lattice& L, const HGroup& H, const PolytopeQuery& q) {
  std::int64_t n = 0;
  for_each_polytope_point(L, H, q, [&](const std::vector<std::int64_t>&) { ++n; });
  return n;
}

inline std::vector<std::vector<std::int64_t>> points(const Lattice& L, const HGroup& H, const PolytopeQuery& q) {
  std::vector<std::vector<std::int64_t>> out;
  for_each_polytope_point(L, H, q, [&](const std::vector<std::int64_t>& x) { out.push_back(x); });
  return out;
}

/// Sub-multiset of N^m: node -> k_v with 0 < k_v <= delta_v - 2.
struct NodeMultiset {
  std::map<std::size_t, int> multiplicities;

  int size() const {
    int s = 0;
    for (const auto& [v, k] : multiplicities) s += k;
    return s;
  }
  VertexSet support() const {
    VertexSet s;
    for (const auto& [v, k] : multiplicities) s.push_back(v);
    return s;
  }
  /// l'(I^m) = sum k_v E*_v.
  LatticeVector cycle(const Lattice& L) const {
    LatticeVector l = L.zero();
    for (const auto& [v, k] : multiplicities) l += Rational(k) * L.e_star(v);
    return l;
  }
};

/// Non-empty sub-multisets of N^m, lexicographic in (k_{v1}, ..., k_{vs}).
inline std::vector<NodeMultiset> node_submultisets(const Lattice& L) {
  const auto& nodes = L.nodes();
  std::vector<NodeMultiset> out;
  std::vector<int> k(nodes.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == nodes.size()) {
      NodeMultiset m;
      for (std::size_t j = 0; j < nodes.size(); ++j)
        if (k[j] > 0) m.multiplicities[nodes[j]] = k[j];
      if (!m.multiplicities.empty()) out.push_back(std::move(m));
      return;
    }
    for (k[i] = 0; k[i] <= L.valency(nodes[i]) - 2; ++k[i]) rec(i + 1);
    k[i] = 0;
  };
  rec(0);
  return out;
}

struct LatticeTerm {
  NodeMultiset multiset;
  int sign = 1;
  /// Number of sub-multisets of N^m (copies of a node told apart) with these
  /// multiplicities: prod_v C(delta_v - 2, k_v).
  std::int64_t weight = 1;
  std::int64_t count = 0;
};

/// Terms (-1)^{|E| - |I^m|} R_h(~P_{I^m}) of the inclusion-exclusion formula,
/// one per multiplicity vector.
inline std::vector<LatticeTerm> lattice_terms(const Lattice& L, const HGroup& H, const HClass& h) {
  if (L.nodes().empty()) throw std::invalid_argument("lattice route not applicable: the graph has no nodes");
  std::vector<LatticeTerm> out;
  const int n_ends = static_cast<int>(L.ends().size());
  for (auto& m : node_submultisets(L)) {
    PolytopeQuery q;
    q.shape = Shape::Concave;
    q.I = m.support();
    q.dilation = m.cycle(L);
    q.boundary = Boundary::Closed;
    q.positivity = Positivity::StrictlyPositive;
    q.fiber = HClass::reduce(q.dilation) - h;
    LatticeTerm t;
    t.sign = ((n_ends - m.size()) % 2 == 0) ? 1 : -1;
    for (const auto& [v, k] : m.multiplicities) t.weight = mul_checked(t.weight, binomial(L.valency(v) - 2, k));
    t.count = count(L, H, q);
    t.multiset = std::move(m);
    out.push_back(std::move(t));
  }
  return out;
}

/// -sw^norm_h by inclusion-exclusion lattice point counting.
inline std::int64_t sw_via_lattice(const Lattice& L, const HGroup& H, const HClass& h) {
  std::int64_t s = 0;
  for (const auto& t : lattice_terms(L, H, h)) s = add_checked(s, t.sign * mul_checked(t.weight, t.count));
  return s;
}

/// Z_K|_N <= E*_v|_N for every node v.
inline bool topological_condition(const Lattice& L) {
  if (L.nodes().empty()) return false;
  const auto& zk = L.canonical_cycle();
  for (auto v : L.nodes())
    for (auto w : L.nodes())
      if (zk[w] > L.e_star(v)[w]) return false;
  return true;
}

/// Query for the topological polytope ~P^top_N: closed, concave over the
/// nodes, dilated by l'_top, strictly positive points in the fiber [l'_top] - h.
inline PolytopeQuery topological_query(const Lattice& L, const HClass& h) {
  PolytopeQuery q;
  q.shape = Shape::Concave;
  q.I = L.nodes();
  q.dilation = L.l_top();
  q.boundary = Boundary::Closed;
  q.positivity = Positivity::StrictlyPositive;
  q.fiber = HClass::reduce(L.l_top()) - h;
  return q;
}

inline std::int64_t sw_via_topological_polytope(const Lattice& L, const HGroup& H, const HClass& h) {
  if (!topological_condition(L))
    throw std::domain_error("inapplicable: Z_K|_N <= E*_v|_N fails for some node (or there are no nodes)");
  return count(L, H, topological_query(L, h));
}

/// End-vertices w whose path to v meets no node other than v.
inline VertexSet node_ends(const Lattice& L, std::size_t v) {
  VertexSet out;
  const auto& g = L.graph();
  for (auto w : L.ends()) {
    const std::vector<std::size_t> pair{std::min(v, w), std::max(v, w)};
    auto path = closure(g, pair).vertices;
    bool clean = true;
    for (auto u : path)
      if (u != v && L.valency(u) >= 3) clean = false;
    if (clean) out.push_back(w);
  }
  return out;
}

/// lambda_{vv'} = (E*_v)_v / (E*_{v'})_v.
inline Rational lambda(const Lattice& L, std::size_t v, std::size_t v2) {
  if (v >= L.rank() || v2 >= L.rank() || L.valency(v) < 3 || L.valency(v2) < 3)
    throw std::invalid_argument("lambda: arguments must be nodes");
  return L.e_star(v)[v] / L.e_star(v2)[v];
}

/// (E*_w)_v / (E*_w)_{v'} = lambda_{vv'} for every w in E_v, all node pairs.
inline bool lambda_ratio_check(const Lattice& L) {
  for (auto v : L.nodes())
    for (auto v2 : L.nodes()) {
      const auto lam = lambda(L, v, v2);
      for (auto w : node_ends(L, v))
        if (L.e_star(w)[v] / L.e_star(w)[v2] != lam) return false;
    }
  return true;
}

/// lambda_{vv'} = lambda_{vv''} * lambda_{v''v'} whenever the node v'' lies
/// on the path between v and v'.
inline bool lambda_cocycle_check(const Lattice& L) {
  for (auto a : L.nodes())
    for (auto b : L.nodes()) {
      const std::vector<std::size_t> pair{std::min(a, b), std::max(a, b)};
      for (auto c : closure(L.graph(), pair).vertices)
        if (L.valency(c) >= 3 && lambda(L, a, b) != lambda(L, a, c) * lambda(L, c, b)) return false;
    }
  return true;
}

}  // namespace plumbing
