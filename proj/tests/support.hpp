#pragma once

// Test-only helpers: data paths, brute-force oracles that share no code path
// with the library kernels, a Brieskorn graph builder and a seeded random
// negative definite tree generator.

#include "plumbing/swcore.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace plumbing::testing {

inline std::string data_path(const std::string& name) { return std::string(PLUMBING_DATA_DIR) + "/" + name; }

inline Lattice load_lattice(const std::string& name) { return Lattice(load_graph(data_path(name))); }

inline std::size_t vid(const Lattice& L, const std::string& id) { return L.graph().require_index(id); }

inline VertexSet vset(const Lattice& L, std::initializer_list<const char*> ids) {
  std::vector<std::size_t> v;
  for (auto id : ids) v.push_back(vid(L, id));
  return make_vertex_set(v);
}

inline VertexSet all_vertices(const Lattice& L) {
  VertexSet s(L.rank());
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

/// Projected LatticeVector -> scaled key, for looking up TermMaps.
inline ScaledVec key(const Lattice& L, std::initializer_list<long> coords) {
  ScaledVec k;
  for (long c : coords) k.push_back(c * L.order());
  return k;
}

inline TermMap terms(const Lattice& L, std::initializer_list<std::pair<std::initializer_list<long>, Coeff>> ts) {
  TermMap m;
  for (const auto& [e, c] : ts) m[key(L, e)] = c;
  return m;
}

// ---------------------------------------------------------------------------
// Oracles

/// -I^{-1} by ordinary Gauss-Jordan elimination over the rationals.
inline RatMatrix oracle_neg_inverse(const PlumbingGraph& g) {
  const auto I = g.intersection_matrix();
  const std::size_t n = I.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(I[i][j]);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a[p][c] == 0) ++p;
    std::swap(a[p], a[c]);
    const Rational piv = a[c][c];
    for (auto& x : a[c]) x /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  RatMatrix out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = -a[i][n + j];
  return out;
}

/// det(-I) by cofactor expansion (fine for the small graphs used here).
inline Integer oracle_det(const std::vector<std::vector<Integer>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Integer d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Integer>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    const Integer t = m[0][j] * oracle_det(minor);
    d += (j % 2 ? -t : t);
  }
  return d;
}

inline Integer oracle_h_order(const PlumbingGraph& g) {
  auto m = g.intersection_matrix();
  for (auto& r : m)
    for (auto& x : r) x = -x;
  return oracle_det(m);
}

/// Every (k, x) decomposition sum k_v E*_v with total multiplicity <= bound,
/// reported with its product of factor coefficients. Coefficients come from
/// expanding (1 - T)^m by hand, not from the library.
/// `dead`, when given, cuts a branch once the partial sum satisfies it; it must
/// be monotone, which holds for upward closed conditions since E* entries are positive.
inline void oracle_decompositions(const Lattice& L, std::int64_t bound,
                                  const std::function<void(const LatticeVector&, Coeff)>& fn,
                                  const std::function<bool(const LatticeVector&)>& dead = {}) {
  const std::size_t n = L.rank();
  auto fcoef = [](int m, std::int64_t c) -> Coeff {
    if (m >= 0) {
      if (c > m) return 0;
      Coeff b = 1;
      for (std::int64_t i = 0; i < c; ++i) b = b * (m - i) / (i + 1);
      return c % 2 ? -b : b;
    }
    // (1 - T)^m = (sum T^j)^{-m}: number of weak compositions of c into -m parts
    Coeff b = 1;
    for (std::int64_t i = 0; i < -m - 1; ++i) b = b * (c + 1 + i) / (i + 1);
    return b;
  };
  std::vector<std::int64_t> c(n, 0);
  LatticeVector acc = L.zero();
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t v, std::int64_t left) {
    if (v == n) {
      Coeff z = 1;
      for (std::size_t w = 0; w < n; ++w) z *= fcoef(L.graph().valency(w) - 2, c[w]);
      if (z != 0) fn(acc, z);
      return;
    }
    // (1 - T)^0 contributes only T^0, and (1 - T)^m with m > 0 stops at T^m
    const int m = L.graph().valency(v) - 2;
    const std::int64_t top = m == 0 ? 0 : (m > 0 ? std::min<std::int64_t>(m, left) : left);
    const LatticeVector saved = acc;
    for (c[v] = 0; c[v] <= top; ++c[v]) {
      if (c[v] > 0) {
        acc += L.e_star(v);
        if (dead && dead(acc)) break;
      }
      rec(v + 1, left - c[v]);
    }
    c[v] = 0;
    acc = saved;
  };
  rec(0, bound);
}

/// z(l') by the bounded (k, x) enumeration.
inline Coeff oracle_coeff(const Lattice& L, const LatticeVector& l) {
  Rational min_entry = L.e_star(0)[0];
  Rational max_coord = 0;
  for (std::size_t w = 0; w < L.rank(); ++w) {
    for (const auto& x : L.e_star(w)) min_entry = std::min(min_entry, x);
    max_coord = std::max(max_coord, l[w]);
  }
  const auto bound = to_int64(ceil_of(max_coord / min_entry));
  Coeff z = 0;
  oracle_decompositions(L, bound, [&](const LatticeVector& s, Coeff c) {
    if (s == l) z += c;
  });
  return z;
}

/// Sum of z(s) over [s] = h with s_v < x_v for some (all) v in I, from the
/// (k, x) enumeration with the multiplicity bound.
inline Coeff oracle_count(const Lattice& L, const HClass& h, const VertexSet& I, const LatticeVector& x, bool all) {
  Rational min_entry = L.e_star(0)[0];
  for (std::size_t w = 0; w < L.rank(); ++w)
    for (const auto& e : L.e_star(w)) min_entry = std::min(min_entry, e);
  std::int64_t bound = 0;
  for (auto v : I) bound = std::max(bound, to_int64(ceil_of(x[v] / min_entry)));
  Coeff total = 0;
  oracle_decompositions(L, bound, [&](const LatticeVector& s, Coeff z) {
    if (HClass::reduce(s) != h) return;
    bool some = false, every = true;
    for (auto v : I) {
      const bool below = s[v] < x[v];
      some |= below;
      every &= below;
    }
    if (all ? every : some) total += z;
  }, [&](const LatticeVector& s) {
    bool some = false, every = true;
    for (auto v : I) {
      const bool reached = s[v] >= x[v];
      some |= reached;
      every &= reached;
    }
    return all ? some : every;
  });
  return total;
}

/// Lattice points of a polytope query by scanning the full bounding box.
inline std::int64_t oracle_polytope_count(const Lattice& L, const PolytopeQuery& q) {
  const auto& ends = L.ends();
  const std::int64_t lo = q.positivity == Positivity::StrictlyPositive ? 1 : 0;
  std::vector<std::int64_t> cap(ends.size(), lo);
  for (std::size_t k = 0; k < ends.size(); ++k)
    for (auto v : q.I)
      cap[k] = std::max(cap[k], to_int64(floor_of(q.dilation[v] / L.e_star(ends[k])[v])));
  std::vector<std::int64_t> x(ends.size(), lo);
  std::int64_t n = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == ends.size()) {
      bool some = false, every = true;
      for (auto v : q.I) {
        Rational lv = 0;
        for (std::size_t j = 0; j < ends.size(); ++j) lv += Rational(x[j]) * L.e_star(ends[j])[v];
        const bool in = q.boundary == Boundary::Closed ? lv <= q.dilation[v] : lv < q.dilation[v];
        some |= in;
        every &= in;
      }
      if (!(q.shape == Shape::Convex ? every : some)) return;
      if (q.fiber) {
        LatticeVector s = L.zero();
        for (std::size_t j = 0; j < ends.size(); ++j) s += Rational(x[j]) * L.e_star(ends[j]);
        if (HClass::reduce(s) != *q.fiber) return;
      }
      ++n;
      return;
    }
    for (x[k] = lo; x[k] <= cap[k]; ++x[k]) rec(k + 1);
  };
  rec(0);
  return n;
}

/// Number of x >= 0 with sum a_i x_i <= b, by recursion on the last weight.
inline std::int64_t oracle_knapsack(const std::vector<std::int64_t>& a, std::int64_t b) {
  if (b < 0) return 0;
  if (a.empty()) return 1;
  std::vector<std::int64_t> rest(a.begin(), a.end() - 1);
  std::int64_t n = 0;
  for (std::int64_t k = 0; k * a.back() <= b; ++k) n += oracle_knapsack(rest, b - k * a.back());
  return n;
}

/// Dense truncated product of geometric series: coefficient map of Z(t) over
/// all exponents with every coordinate <= box.
inline std::map<LatticeVector, Coeff> oracle_series_box(const Lattice& L, long box) {
  std::map<LatticeVector, Coeff> cur{{L.zero(), 1}};
  auto fits = [&](const LatticeVector& e) {
    for (const auto& c : e)
      if (c > box) return false;
    return true;
  };
  for (std::size_t v = 0; v < L.rank(); ++v) {
    const int m = L.graph().valency(v) - 2;
    if (m == 0) continue;
    // multiply by (1 - T)^m one linear factor at a time
    for (int rep = 0; rep < std::abs(m); ++rep) {
      std::map<LatticeVector, Coeff> next;
      for (const auto& [e, c] : cur) {
        if (m > 0) {
          next[e] += c;
          auto f = e + L.e_star(v);
          if (fits(f)) next[f] -= c;
        } else {
          for (LatticeVector f = e; fits(f); f += L.e_star(v)) next[f] += c;
        }
      }
      cur.clear();
      for (const auto& [e, c] : next)
        if (c != 0) cur[e] = c;
    }
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Graph builders

/// Hirzebruch-Jung continued fraction a/b = b1 - 1/(b2 - ...), a > b >= 1.
inline std::vector<int> hj_fraction(long a, long b) {
  std::vector<int> out;
  while (b > 0) {
    const long c = (a + b - 1) / b;  // ceil
    out.push_back(static_cast<int>(c));
    const long r = c * b - a;
    a = b;
    b = r;
  }
  return out;
}

/// Star-shaped graph of Sigma(p,q,r): legs p/w1, q/w2, r/w3 with
/// e0 + sum w_i/a_i = -1/(pqr).
inline PlumbingGraph brieskorn_graph(long p, long q, long r) {
  const long a[3] = {p, q, r};
  long w[3];
  Rational e = Rational(-1, p * q * r);
  for (int i = 0; i < 3; ++i) {
    const long rest = p * q * r / a[i];
    long inv = 1;
    while ((rest % a[i]) * inv % a[i] != 1 % a[i]) ++inv;
    w[i] = ((a[i] - inv) % a[i] + a[i]) % a[i];
    if (a[i] == 1) w[i] = 0;
    e -= Rational(w[i], a[i]);
  }
  e.canonicalize();
  std::vector<Vertex> vs{{"c", static_cast<int>(e.get_num().get_si())}};
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (int i = 0; i < 3; ++i) {
    std::size_t prev = 0;
    int k = 0;
    for (int b : hj_fraction(a[i], w[i])) {
      vs.push_back({"l" + std::to_string(i + 1) + "_" + std::to_string(++k), -b});
      es.emplace_back(prev, vs.size() - 1);
      prev = vs.size() - 1;
    }
  }
  return PlumbingGraph(vs, es);
}

struct RandomGraph {
  std::uint64_t seed;
  PlumbingGraph graph;
};

/// Rough cost of the division route: numerator terms of the reduction times
/// the growth of the numerator under the equivariant split.
inline std::int64_t split_size(const Lattice& L) {
  std::int64_t s = 1;
  for (std::size_t v = 0; v < L.rank(); ++v) {
    const int m = L.valency(v) - 2;
    for (int k = 0; k < -m; ++k) s *= L.class_order(L.e_star(v));
    if (m > 0) s *= m + 1;
  }
  return s;
}

/// Seeded random negative definite trees with at most `max_vertices`
/// vertices and |H| <= max_h. Candidates whose E* entries or split size
/// would make the exhaustive checks slow are skipped; `count` graphs are
/// always produced.
inline std::vector<RandomGraph> random_trees(std::size_t count, std::uint64_t seed, std::size_t max_vertices = 8,
                                             long max_h = 12) {
  std::mt19937_64 rng(seed);
  std::vector<RandomGraph> out;
  // draw the size first: filtering uniform trees would leave mostly tiny ones
  while (out.size() < count) {
    const std::size_t n = 1 + rng() % max_vertices;
    for (int attempt = 0; attempt < 20000; ++attempt) {
      const std::uint64_t s = rng();
      std::mt19937_64 g(s);
      std::vector<Vertex> vs;
      std::vector<std::pair<std::size_t, std::size_t>> es;
      for (std::size_t i = 0; i < n; ++i) {
        // weights lean on -2 so that |H| stays small; early vertices often hang off v0 to make nodes
        static constexpr int kEuler[] = {-1, -2, -2, -2, -3, -3, -4, -5};
        vs.push_back({"v" + std::to_string(i), kEuler[g() % 8]});
        if (i > 0) es.emplace_back(i <= 3 && g() % 2 ? 0 : g() % i, i);
      }
      PlumbingGraph pg(vs, es);
      if (!validate(pg).ok()) continue;
      if (oracle_h_order(pg) > max_h) continue;
      Lattice L(pg);
      Rational biggest = 0;
      for (std::size_t v = 0; v < L.rank(); ++v)
        for (const auto& x : L.e_star(v)) biggest = std::max(biggest, x);
      if (biggest > 200) continue;
      if (split_size(L) > 4096) continue;
      out.push_back({s, pg});
      break;
    }
  }
  return out;
}

}  // namespace plumbing::testing
