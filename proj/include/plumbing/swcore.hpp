#pragma once

// Normalized Seiberg-Witten invariants by independent routes, the shift to
// the raw invariant, and the quadratic consistency check
//   -Q_{[l'],V}(l') = ((K + 2l')^2 + |V|)/8 + sw_{-[l']*can},  l' in Z_K + int(S').
//
// All route values are -sw^norm_h.

#include "plumbing/counting.hpp"
#include "plumbing/decomp.hpp"
#include "plumbing/polytopes.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumbing {

enum class Method { Duality, Polypart, Division, Lattice, All };

inline Method parse_method(const std::string& s) {
  if (s == "duality") return Method::Duality;
  if (s == "polypart") return Method::Polypart;
  if (s == "division") return Method::Division;
  if (s == "lattice") return Method::Lattice;
  if (s == "all") return Method::All;
  throw std::invalid_argument("unknown method '" + s + "'");
}

/// Variables the node-indexed formulas use: N, or all of V when N is empty.
inline VertexSet route_variables(const Lattice& L) {
  if (!L.nodes().empty()) return L.nodes();
  VertexSet all;
  for (std::size_t v = 0; v < L.rank(); ++v) all.push_back(v);
  return all;
}

/// Q_{[Z_K]-h, I}(Z_K - r_h).
inline Coeff sw_norm_via_duality(const Lattice& L, const HGroup& H, const HClass& h) {
  const auto& zk = L.canonical_cycle();
  return count_Q(L, H, HClass::reduce(zk) - h, route_variables(L), zk - h.rep());
}

/// P+_{h,I}(1) from the duality construction.
inline Coeff sw_norm_via_polypart(const Lattice& L, const HGroup& H, const HClass& h) {
  return evaluate_at_one(polypart_dual_terms(L, H, h, route_variables(L)));
}

/// P+_{h,I}(1) from Euclidean division of the h-part of the reduced zeta function.
inline Coeff sw_norm_via_division(const RatFunc& part) { return evaluate_at_one(euclid_divide(part).poly_part); }

inline Coeff sw_norm_via_division(const Lattice& L, const HClass& h) {
  return sw_norm_via_division(zeta_part(L, h, route_variables(L)));
}

/// ((K + 2 r_h)^2 + |V|) / 8 with K = -Z_K.
inline Rational normalization_shift(const Lattice& L, const HClass& h) {
  const auto x = Rational(2) * h.rep() - L.canonical_cycle();
  return (L.pairing(x, x) + Rational(static_cast<long>(L.rank()))) / Rational(8);
}

/// sw_{-h*can} = sw^norm_h - shift, from the route value -sw^norm_h.
inline Rational sw_raw(const Lattice& L, const HClass& h, Coeff neg_sw_norm) {
  return Rational(-neg_sw_norm) - normalization_shift(L, h);
}

struct SWEntry {
  HClass h;
  std::optional<Coeff> duality;
  std::optional<Coeff> polypart;
  std::optional<Coeff> division;
  std::optional<Coeff> lattice;
  std::optional<Coeff> topological;
  std::optional<Rational> raw;
  bool agree = false;
  std::vector<std::string> errors;

  /// The agreed value, if every computed route gave the same number.
  std::optional<Coeff> value() const {
    std::optional<Coeff> v;
    for (const auto& r : {duality, polypart, division, lattice, topological}) {
      if (!r) continue;
      if (v && *v != *r) return std::nullopt;
      v = r;
    }
    return v;
  }
};

struct SWReport {
  std::vector<SWEntry> entries;

  bool all_agree() const {
    for (const auto& e : entries)
      if (!e.agree) return false;
    return true;
  }
};

struct SWOptions {
  Method method = Method::All;
  bool topological = true;
};

/// One entry per class of H, sorted by representative. A route that does not
/// apply (no nodes, failed polytope condition) is recorded in `errors` and
/// left empty; it does not break agreement.
inline SWReport sw_report(const Lattice& L, const HGroup& H, const SWOptions& opt = {}) {
  const bool all = opt.method == Method::All;
  SWReport rep;
  std::map<HClass, RatFunc> parts;
  if (all || opt.method == Method::Division) parts = equivariant_split(L, reduce(L, zeta(L), route_variables(L)));
  for (const auto& h : H.classes()) {
    SWEntry e;
    e.h = h;
    if (all || opt.method == Method::Duality) e.duality = sw_norm_via_duality(L, H, h);
    if (all || opt.method == Method::Polypart) e.polypart = sw_norm_via_polypart(L, H, h);
    if (all || opt.method == Method::Division) e.division = sw_norm_via_division(parts.at(h));
    if (all || opt.method == Method::Lattice) {
      if (L.nodes().empty()) e.errors.push_back("lattice: not applicable, the graph has no nodes");
      else e.lattice = sw_via_lattice(L, H, h);
    }
    if (all && opt.topological) {
      if (topological_condition(L)) e.topological = sw_via_topological_polytope(L, H, h);
      else e.errors.push_back("topological: inapplicable, Z_K|_N <= E*_v|_N fails");
    }
    const auto v = e.value();
    e.agree = v.has_value();
    if (e.agree) e.raw = sw_raw(L, h, *v);
    else e.errors.push_back("routes disagree");
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

struct QuadraticSample {
  LatticeVector l;
  HClass h;
  Rational lhs;  // -Q_{[l'],V}(l')
  Rational rhs;  // ((K+2l')^2 + |V|)/8 + sw_raw([l'])
  bool pass = false;
};

struct QuadraticReport {
  std::vector<QuadraticSample> samples;
  bool all_pass() const {
    for (const auto& s : samples)
      if (!s.pass) return false;
    return true;
  }
};

/// Samples l' = Z_K + sum_v n_v E*_v with n_v in [1, max_n]; the first sample
/// is the minimal one (all n_v = 1). sw_raw comes from the duality route.
inline QuadraticReport quadratic_check(const Lattice& L, const HGroup& H, int samples, std::uint64_t seed,
                                       int max_n = 2) {
  if (samples < 0) throw std::invalid_argument("quadratic_check: negative sample count");
  if (max_n < 1) throw std::invalid_argument("quadratic_check: max_n must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(1, max_n);
  VertexSet all;
  for (std::size_t v = 0; v < L.rank(); ++v) all.push_back(v);
  std::map<HClass, Rational> raw;
  QuadraticReport rep;
  for (int i = 0; i < samples; ++i) {
    LatticeVector l = L.canonical_cycle();
    for (std::size_t v = 0; v < L.rank(); ++v) l += Rational(i == 0 ? 1 : dist(rng)) * L.e_star(v);
    QuadraticSample s;
    s.h = L.class_of(l);
    s.lhs = Rational(-count_Q(L, H, s.h, all, l));
    if (!raw.count(s.h)) raw[s.h] = sw_raw(L, s.h, sw_norm_via_duality(L, H, s.h));
    const auto x = Rational(2) * l - L.canonical_cycle();
    s.rhs = (L.pairing(x, x) + Rational(static_cast<long>(L.rank()))) / Rational(8) + raw[s.h];
    s.pass = s.lhs == s.rhs;
    s.l = std::move(l);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

}  // namespace plumbing
