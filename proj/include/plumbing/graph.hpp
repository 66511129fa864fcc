#pragma once

// Plumbing graphs: parsing, structural validation and vertex classification.
//
// A graph is a decorated tree; every vertex carries an Euler number and an
// implicit genus 0. The order in which vertices are declared is the E-basis
// order used by every vector downstream.

#include "plumbing/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plumbing {

/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<std::size_t>;

inline VertexSet make_vertex_set(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Vertex {
  std::string id;
  int euler = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class PlumbingGraph {
 public:
  PlumbingGraph() = default;

  /// Edges are index pairs into `vertices`. Self-loops, repeated edges and
  /// out-of-range indices are rejected; connectivity and definiteness are
  /// checked separately by validate().
  PlumbingGraph(std::vector<Vertex> vertices, std::vector<std::pair<std::size_t, std::size_t>> edges)
      : vertices_(std::move(vertices)), adjacency_(vertices_.size()) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!index_.emplace(vertices_[i].id, i).second)
        throw std::invalid_argument("duplicate vertex id '" + vertices_[i].id + "'");
    }
    for (auto [a, b] : edges) {
      if (a >= vertices_.size() || b >= vertices_.size())
        throw std::invalid_argument("edge references a vertex index out of range");
      if (a == b) throw std::invalid_argument("self-loop at vertex '" + vertices_[a].id + "'");
      if (std::find(adjacency_[a].begin(), adjacency_[a].end(), b) != adjacency_[a].end())
        throw std::invalid_argument("repeated edge " + vertices_[a].id + " " + vertices_[b].id);
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
      edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  const Vertex& vertex(std::size_t v) const { return vertices_.at(v); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  int valency(std::size_t v) const { return static_cast<int>(adjacency_.at(v).size()); }

  std::optional<std::size_t> index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(std::string_view id) const {
    auto i = index_of(id);
    if (!i) throw std::invalid_argument("unknown vertex '" + std::string(id) + "'");
    return *i;
  }

  /// Diagonal: Euler numbers; off-diagonal: 1 per edge.
  std::vector<std::vector<Integer>> intersection_matrix() const {
    const std::size_t n = size();
    std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = vertices_[i].euler;
    for (auto [a, b] : edges_) m[a][b] = m[b][a] = 1;
    return m;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

inline bool is_id_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

}  // namespace detail

/// Grammar: `# comment`, `vertex <id> <integer>`, `edge <id> <id>`.
inline PlumbingGraph parse_graph(std::string_view text) {
  std::vector<Vertex> vertices;
  std::map<std::string, std::size_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_lines;

  auto check_id = [](const detail::Token& t, std::size_t line) {
    if (t.text.empty()) throw ParseError(line, t.column, "empty identifier");
    for (std::size_t k = 0; k < t.text.size(); ++k)
      if (!detail::is_id_char(t.text[k]))
        throw ParseError(line, t.column + k, "invalid character in identifier '" + t.text + "'");
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    auto tokens = detail::tokenize_line(line);
    if (tokens.empty() || tokens[0].text[0] == '#') {
      if (eol == text.size()) break;
      continue;
    }
    const auto& kw = tokens[0];
    if (kw.text == "vertex") {
      if (tokens.size() != 3)
        throw ParseError(line_no, kw.column, "expected 'vertex <id> <integer>'");
      check_id(tokens[1], line_no);
      const auto& num = tokens[2];
      long value = 0;
      try {
        std::size_t used = 0;
        value = std::stol(num.text, &used);
        if (used != num.text.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(line_no, num.column, "expected an integer Euler number, got '" + num.text + "'");
      }
      if (ids.count(tokens[1].text))
        throw ParseError(line_no, tokens[1].column, "duplicate vertex id '" + tokens[1].text + "'");
      ids.emplace(tokens[1].text, vertices.size());
      vertices.push_back({tokens[1].text, static_cast<int>(value)});
    } else if (kw.text == "edge") {
      if (tokens.size() != 3) throw ParseError(line_no, kw.column, "expected 'edge <id> <id>'");
      check_id(tokens[1], line_no);
      check_id(tokens[2], line_no);
      std::size_t ends[2];
      for (int k = 0; k < 2; ++k) {
        auto it = ids.find(tokens[1 + k].text);
        if (it == ids.end())
          throw ParseError(line_no, tokens[1 + k].column, "unknown vertex '" + tokens[1 + k].text + "'");
        ends[k] = it->second;
      }
      if (ends[0] == ends[1]) throw ParseError(line_no, tokens[2].column, "self-loop edge");
      auto key = std::make_pair(std::min(ends[0], ends[1]), std::max(ends[0], ends[1]));
      if (edge_lines.count(key)) throw ParseError(line_no, kw.column, "repeated edge");
      edge_lines.emplace(key, line_no);
      edges.emplace_back(ends[0], ends[1]);
    } else {
      throw ParseError(line_no, kw.column, "unknown keyword '" + kw.text + "'");
    }
    if (eol == text.size()) break;
  }
  if (vertices.empty()) throw ParseError(line_no, 1, "graph has no vertices");
  return PlumbingGraph(std::move(vertices), std::move(edges));
}

inline PlumbingGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

inline std::string to_graph_text(const PlumbingGraph& g) {
  std::string out;
  for (const auto& v : g.vertices()) out += "vertex " + v.id + " " + std::to_string(v.euler) + "\n";
  for (auto [a, b] : g.edges()) out += "edge " + g.vertex(a).id + " " + g.vertex(b).id + "\n";
  return out;
}

struct ValidationReport {
  bool connected = false;
  bool tree = false;
  bool negative_definite = false;
  /// Leading principal minors of -I, as far as they were computed.
  std::vector<Integer> minors;
  std::vector<std::string> messages;

  bool ok() const noexcept { return connected && tree && negative_definite; }
};

namespace detail {

/// Fraction-free (Bareiss) elimination without pivoting. Returns the leading
/// principal minors until the first one that vanishes.
inline std::vector<Integer> leading_minors(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  std::vector<Integer> minors;
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    minors.push_back(a[k][k]);
    if (a[k][k] == 0) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return minors;
}

}  // namespace detail

inline ValidationReport validate(const PlumbingGraph& g) {
  ValidationReport r;
  const std::size_t n = g.size();
  if (n == 0) {
    r.messages.push_back("graph has no vertices");
    return r;
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> todo;
  todo.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop();
    for (auto w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        todo.push(w);
      }
  }
  r.connected = reached == n;
  if (!r.connected)
    r.messages.push_back("graph is not connected (" + std::to_string(reached) + " of " +
                         std::to_string(n) + " vertices reachable)");
  r.tree = r.connected && g.edges().size() + 1 == n;
  if (!r.tree)
    r.messages.push_back("graph is not a tree (" + std::to_string(g.edges().size()) + " edges, " +
                         std::to_string(n) + " vertices)");

  auto m = g.intersection_matrix();
  for (auto& row : m)
    for (auto& x : row) x = -x;
  r.minors = detail::leading_minors(std::move(m));
  r.negative_definite = r.minors.size() == n;
  for (const auto& d : r.minors)
    if (d <= 0) r.negative_definite = false;
  if (!r.negative_definite) {
    std::size_t k = 0;
    while (k < r.minors.size() && r.minors[k] > 0) ++k;
    r.messages.push_back("intersection matrix is not negative definite (leading minor " +
                         std::to_string(k + 1) + " of -I is " + r.minors[k].get_str() + ")");
  }
  return r;
}

struct VertexClasses {
  VertexSet nodes;  // valency >= 3
  VertexSet ends;   // valency == 1
  std::vector<int> valency;
};

inline VertexClasses classify_vertices(const PlumbingGraph& g) {
  VertexClasses c;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const int d = g.valency(v);
    c.valency.push_back(d);
    if (d >= 3) c.nodes.push_back(v);
    if (d == 1) c.ends.push_back(v);
  }
  return c;
}

struct Closure {
  VertexSet vertices;
  /// Valency inside the closure subgraph, parallel to `vertices`.
  std::vector<int> valency;
};

/// Vertex set of the minimal connected full subgraph containing `subset`.
inline Closure closure(const PlumbingGraph& g, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("closure of the empty set");
  for (auto v : subset)
    if (v >= g.size()) throw std::invalid_argument("closure: vertex index out of range");
  const std::size_t n = g.size();
  const std::size_t root = subset.front();
  std::vector<std::size_t> parent(n, n);
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> todo;
  todo.push(root);
  seen[root] = true;
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop();
    for (auto w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        todo.push(w);
      }
  }
  std::vector<bool> in(n, false);
  in[root] = true;
  for (auto v : subset) {
    if (!seen[v]) throw std::invalid_argument("closure: vertices lie in different components");
    for (auto u = v; !in[u]; u = parent[u]) in[u] = true;
  }
  Closure c;
  for (std::size_t v = 0; v < n; ++v)
    if (in[v]) {
      c.vertices.push_back(v);
      int d = 0;
      for (auto w : g.neighbors(v)) d += in[w] ? 1 : 0;
      c.valency.push_back(d);
    }
  return c;
}

}  // namespace plumbing
