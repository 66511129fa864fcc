#include "support.hpp"

#include <gtest/gtest.h>

using namespace plumbing;
using namespace plumbing::testing;

namespace {

const char* kSigma257 =
    "# comment line\n"
    "vertex E1 -1\n"
    "vertex E2 -2\n"
    "vertex E3 -5\n"
    "vertex E4 -4\n"
    "vertex E5 -2\n"
    "\n"
    "edge E2 E1\n"
    "edge E1 E3\n"
    "edge E1 E4\n"
    "edge E4 E5\n";

ParseError parse_error_of(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for:\n" << text;
  return ParseError(0, 0, "none");
}

}  // namespace

TEST(GraphParse, Sigma257) {
  auto g = parse_graph(kSigma257);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.edges().size(), 4u);
  EXPECT_EQ(g.vertex(g.require_index("E3")).euler, -5);
  EXPECT_EQ(g.valency(g.require_index("E1")), 3);
  EXPECT_EQ(g.valency(g.require_index("E4")), 2);
  EXPECT_TRUE(validate(g).ok());
}

TEST(GraphParse, SingleVertex) {
  auto g = parse_graph("vertex a -2");
  EXPECT_EQ(g.size(), 1u);
  EXPECT_TRUE(g.edges().empty());
  EXPECT_TRUE(validate(g).ok());
}

TEST(GraphParse, UnknownVertexHasPosition) {
  auto e = parse_error_of("vertex a -2\nedge a  zz\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 9u);
  EXPECT_NE(std::string(e.what()).find("unknown vertex"), std::string::npos);
}

TEST(GraphParse, Errors) {
  EXPECT_EQ(parse_error_of("vertex a x\n").column(), 10u);
  EXPECT_EQ(parse_error_of("vertex a -2\nvertex a -3\n").line(), 2u);
  EXPECT_EQ(parse_error_of("vertex a -2\nvertex b -2\nedge a b\nedge b a\n").line(), 4u);
  EXPECT_EQ(parse_error_of("vertex a -2\nedge a a\n").line(), 2u);
  EXPECT_EQ(parse_error_of("vertex a- -2\n").column(), 9u);
  EXPECT_EQ(parse_error_of("node a -2\n").column(), 1u);
  EXPECT_EQ(parse_error_of("vertex a\n").line(), 1u);
  EXPECT_NE(std::string(parse_error_of("# nothing\n").what()).find("no vertices"), std::string::npos);
  EXPECT_EQ(parse_error_of("vertex a 3.5\n").column(), 10u);
}

TEST(GraphParse, RoundTrip) {
  auto g = parse_graph(kSigma257);
  auto h = parse_graph(to_graph_text(g));
  EXPECT_EQ(to_graph_text(g), to_graph_text(h));
  EXPECT_EQ(g.intersection_matrix(), h.intersection_matrix());
}

TEST(GraphParse, ShippedFilesLoad) {
  for (auto name : {"sigma257.graph", "two_node_z3.graph", "three_node.graph", "brieskorn235.graph",
                    "brieskorn237.graph", "brieskorn345.graph", "lens8.graph", "single.graph", "star6.graph"}) {
    SCOPED_TRACE(name);
    EXPECT_TRUE(validate(load_graph(data_path(name))).ok());
  }
  EXPECT_THROW(load_graph(data_path("missing.graph")), std::runtime_error);
}

TEST(GraphValidate, IndefiniteEdge) {
  auto r = validate(parse_graph("vertex a -1\nvertex b -1\nedge a b\n"));
  EXPECT_TRUE(r.connected);
  EXPECT_TRUE(r.tree);
  EXPECT_FALSE(r.negative_definite);
  ASSERT_FALSE(r.messages.empty());
  EXPECT_NE(r.messages.back().find("leading minor 2 of -I is 0"), std::string::npos);
}

TEST(GraphValidate, Disconnected) {
  auto r = validate(parse_graph("vertex a -2\nvertex b -2\n"));
  EXPECT_FALSE(r.connected);
  EXPECT_FALSE(r.ok());
}

TEST(GraphValidate, MinorsMatchCofactorDeterminants) {
  auto g = load_graph(data_path("sigma257.graph"));
  auto r = validate(g);
  auto m = g.intersection_matrix();
  for (auto& row : m)
    for (auto& x : row) x = -x;
  ASSERT_EQ(r.minors.size(), g.size());
  for (std::size_t k = 1; k <= g.size(); ++k) {
    std::vector<std::vector<Integer>> lead(k, std::vector<Integer>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead[i][j] = m[i][j];
    EXPECT_EQ(r.minors[k - 1], oracle_det(lead)) << "k=" << k;
  }
}

TEST(GraphClassify, Sigma257) {
  auto g = parse_graph(kSigma257);
  auto c = classify_vertices(g);
  auto id = [&](const char* s) { return g.require_index(s); };
  EXPECT_EQ(c.nodes, VertexSet{id("E1")});
  EXPECT_EQ(c.ends, make_vertex_set({id("E2"), id("E3"), id("E5")}));
  EXPECT_EQ(c.valency[id("E4")], 2);
}

TEST(GraphClassify, SingleAndTwoNode) {
  auto c = classify_vertices(parse_graph("vertex a -2"));
  EXPECT_TRUE(c.nodes.empty());
  EXPECT_TRUE(c.ends.empty());
  EXPECT_EQ(c.valency[0], 0);

  auto g = load_graph(data_path("two_node_z3.graph"));
  auto d = classify_vertices(g);
  auto id = [&](const char* s) { return g.require_index(s); };
  EXPECT_EQ(d.nodes, make_vertex_set({id("v1"), id("v2")}));
  EXPECT_EQ(d.ends, make_vertex_set({id("w1"), id("w2"), id("w3"), id("w4")}));
}

TEST(GraphClosure, Paths) {
  auto g = parse_graph(kSigma257);
  auto id = [&](const char* s) { return g.require_index(s); };
  std::vector<std::size_t> one{id("E1")};
  auto c1 = closure(g, one);
  EXPECT_EQ(c1.vertices, VertexSet{id("E1")});
  EXPECT_EQ(c1.valency, std::vector<int>{0});

  std::vector<std::size_t> two{id("E1"), id("E5")};
  EXPECT_EQ(closure(g, two).vertices, make_vertex_set({id("E1"), id("E4"), id("E5")}));

  auto h = load_graph(data_path("two_node_z3.graph"));
  auto hid = [&](const char* s) { return h.require_index(s); };
  std::vector<std::size_t> nodes{hid("v1"), hid("v2")};
  auto c = closure(h, nodes);
  EXPECT_EQ(c.vertices, make_vertex_set({hid("v1"), hid("a"), hid("b"), hid("c"), hid("d"), hid("v2")}));
  int ends = 0;
  for (int d : c.valency) ends += d == 1;
  EXPECT_EQ(ends, 2);

  EXPECT_THROW(closure(g, std::span<const std::size_t>{}), std::invalid_argument);
}
