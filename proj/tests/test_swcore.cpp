#include "support.hpp"

#include <gtest/gtest.h>

using namespace plumbing;
using namespace plumbing::testing;

TEST(Routes, Sigma257) {
  auto L = load_lattice("sigma257.graph");
  HGroup H(L);
  const auto zero = HClass::reduce(L.zero());
  EXPECT_EQ(sw_norm_via_duality(L, H, zero), 2);
  EXPECT_EQ(sw_norm_via_polypart(L, H, zero), 2);
  EXPECT_EQ(sw_norm_via_division(L, zero), 2);
  auto rep = sw_report(L, H);
  ASSERT_EQ(rep.entries.size(), 1u);
  const auto& e = rep.entries[0];
  EXPECT_TRUE(e.agree);
  EXPECT_EQ(e.lattice, 2);
  EXPECT_EQ(e.topological, 2);
  EXPECT_EQ(e.value(), 2);
}

TEST(Routes, TwoNode) {
  auto L = load_lattice("two_node_z3.graph");
  HGroup H(L);
  const auto h1 = L.class_of(L.e_star(vid(L, "w3")));
  const std::map<HClass, Coeff> want{{HClass::reduce(L.zero()), 5}, {h1, 3}, {2 * h1, 3}};
  auto rep = sw_report(L, H);
  EXPECT_TRUE(rep.all_agree());
  ASSERT_EQ(rep.entries.size(), 3u);
  for (const auto& e : rep.entries) {
    SCOPED_TRACE(e.h.to_string());
    EXPECT_EQ(e.duality, want.at(e.h));
    EXPECT_EQ(e.polypart, want.at(e.h));
    EXPECT_EQ(e.division, want.at(e.h));
    EXPECT_EQ(e.lattice, want.at(e.h));
    EXPECT_FALSE(e.topological.has_value());
    EXPECT_FALSE(e.errors.empty());
  }
}

TEST(Routes, ThreeNode) {
  auto L = load_lattice("three_node.graph");
  HGroup H(L);
  auto rep = sw_report(L, H);
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_TRUE(rep.all_agree());
  EXPECT_EQ(rep.entries[0].value(), 13);
}

TEST(Routes, NoNodesUsesAllVertices) {
  auto L = load_lattice("lens8.graph");
  HGroup H(L);
  EXPECT_EQ(route_variables(L), all_vertices(L));
  auto rep = sw_report(L, H);
  EXPECT_EQ(rep.entries.size(), 8u);
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(e.agree);
    EXPECT_FALSE(e.lattice.has_value());
    EXPECT_EQ(e.duality, sw_norm_via_polypart(L, H, e.h));
  }
  auto S = load_lattice("single.graph");
  HGroup HS(S);
  EXPECT_TRUE(sw_report(S, HS).all_agree());
}

TEST(Routes, SingleMethod) {
  auto L = load_lattice("two_node_z3.graph");
  HGroup H(L);
  auto rep = sw_report(L, H, SWOptions{Method::Division, false});
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(e.division.has_value());
    EXPECT_FALSE(e.duality.has_value());
    EXPECT_FALSE(e.lattice.has_value());
  }
  EXPECT_EQ(parse_method("lattice"), Method::Lattice);
  EXPECT_THROW(parse_method("ehrhart"), std::invalid_argument);
}

TEST(Normalization, Shift) {
  auto L = load_lattice("sigma257.graph");
  const auto zero = HClass::reduce(L.zero());
  const auto& zk = L.canonical_cycle();
  // r_0 = 0: the shift is (K^2 + |V|)/8
  EXPECT_EQ(normalization_shift(L, zero), (L.pairing(zk, zk) + Rational(5)) / Rational(8));
  EXPECT_EQ(normalization_shift(L, zero), Rational(0));
  EXPECT_EQ(sw_raw(L, zero, 2), Rational(-2));

  auto M = load_lattice("two_node_z3.graph");
  const auto h1 = M.class_of(M.e_star(vid(M, "w3")));
  const auto x = Rational(2) * h1.rep() - M.canonical_cycle();
  EXPECT_EQ(normalization_shift(M, h1), (M.pairing(x, x) + Rational(10)) / Rational(8));
}

TEST(Quadratic, KnownGraphs) {
  for (auto name : {"sigma257.graph", "two_node_z3.graph", "lens8.graph", "star6.graph"}) {
    SCOPED_TRACE(name);
    auto L = load_lattice(name);
    HGroup H(L);
    auto rep = quadratic_check(L, H, 5, 20240611);
    ASSERT_EQ(rep.samples.size(), 5u);
    EXPECT_TRUE(rep.all_pass());
    LatticeVector minimal = L.canonical_cycle();
    for (std::size_t v = 0; v < L.rank(); ++v) minimal += L.e_star(v);
    EXPECT_EQ(rep.samples[0].l, minimal);
  }
}

TEST(Quadratic, MinimalSampleOnRandomTree) {
  for (const auto& g : random_trees(3, 99, 4)) {
    Lattice L(g.graph);
    HGroup H(L);
    EXPECT_TRUE(quadratic_check(L, H, 1, 1).all_pass()) << to_graph_text(g.graph);
  }
}

TEST(Quadratic, Deterministic) {
  auto L = load_lattice("two_node_z3.graph");
  HGroup H(L);
  auto a = quadratic_check(L, H, 4, 5, 3);
  auto b = quadratic_check(L, H, 4, 5, 3);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].l, b.samples[i].l);
  EXPECT_THROW(quadratic_check(L, H, -1, 0), std::invalid_argument);
}
