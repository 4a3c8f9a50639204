#pragma once

// Instance generators: fixed-clause-length random 3-CNF, random 2-trees and
// the k-coloring encoding COL(G, k).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gsat/cnf.hpp"
#include "gsat/errors.hpp"
#include "gsat/rng.hpp"

namespace gsat {

// round(N * L), halves rounded up.
inline std::size_t clause_count_for(Var num_vars, double ratio) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(num_vars) * ratio + 0.5));
}

// Every clause independently: three distinct variables drawn uniformly
// without replacement, each negated with probability 1/2.
inline Formula random_3cnf(Var num_vars, double ratio, Rng &rng) {
  if (num_vars < 3) throw ContractViolation("random 3-CNF needs at least 3 variables");
  if (!(ratio > 0.0)) throw ContractViolation("clause-to-variable ratio must be positive");
  const std::size_t m = clause_count_for(num_vars, ratio);
  std::vector<std::vector<Literal>> clauses;
  clauses.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::array<Var, 3> vars{};
    for (std::size_t j = 0; j < 3; ++j) {
      Var v;
      do {
        v = static_cast<Var>(rng.below(num_vars) + 1);
      } while (std::find(vars.begin(), vars.begin() + j, v) != vars.begin() + j);
      vars[j] = v;
    }
    std::vector<Literal> clause;
    clause.reserve(3);
    for (Var v : vars) clause.push_back(rng.coin() ? Literal::negative(v) : Literal::positive(v));
    clauses.push_back(std::move(clause));
  }
  return Formula(num_vars, clauses);
}

// Undirected simple graph on vertices 1..num_vertices.
struct Graph {
  using Edge = std::pair<std::uint32_t, std::uint32_t>;  // first < second

  // One 2-tree expansion: vertex `added` joined to both ends of `base`.
  struct Expansion {
    std::uint32_t added;
    Edge base;
  };

  std::uint32_t num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<Expansion> trail;  // filled by random_2tree

  static Edge make_edge(std::uint32_t a, std::uint32_t b) {
    return a < b ? Edge{a, b} : Edge{b, a};
  }

  // Rejects self-loops, duplicates, unnormalized or out-of-range edges.
  void validate() const {
    std::vector<Edge> sorted = edges;
    for (const auto &[a, b] : sorted)
      if (a == 0 || b > num_vertices || a >= b)
        throw ContractViolation("edge {" + std::to_string(a) + "," + std::to_string(b) +
                                "} is not a normalized edge of the graph");
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ContractViolation("duplicate edge");
  }
};

// Triangle on {1,2,3}, then p-3 expansions of a uniformly chosen current
// edge. Vertices are numbered in order of addition.
inline Graph random_2tree(std::uint32_t num_vertices, Rng &rng) {
  if (num_vertices < 3) throw ContractViolation("a 2-tree has at least 3 vertices");
  Graph g;
  g.num_vertices = num_vertices;
  g.edges.reserve(2 * static_cast<std::size_t>(num_vertices) - 3);
  g.edges = {{1, 2}, {1, 3}, {2, 3}};
  for (std::uint32_t z = 4; z <= num_vertices; ++z) {
    const Graph::Edge base = g.edges[rng.below(g.edges.size())];
    g.edges.push_back(Graph::make_edge(base.first, z));
    g.edges.push_back(Graph::make_edge(base.second, z));
    g.trail.push_back({z, base});
  }
  return g;
}

// col(v, i) <-> DIMACS variable (v - 1) * k + i.
struct VarMap {
  std::uint32_t num_vertices = 0;
  std::uint32_t colors = 0;

  Var var(std::uint32_t vertex, std::uint32_t color) const {
    return (vertex - 1) * colors + color;
  }
  std::uint32_t vertex_of(Var v) const { return (v - 1) / colors + 1; }
  std::uint32_t color_of(Var v) const { return (v - 1) % colors + 1; }
  Var num_vars() const { return num_vertices * colors; }
};

struct ColoringEncoding {
  Formula formula;
  VarMap map;
};

inline std::size_t coloring_clause_count(std::size_t vertices, std::size_t edges, std::size_t k) {
  return edges * k + vertices + vertices * k * (k - 1) / 2;
}

// Clause groups, in this order:
//   1. -col(x,i) | -col(y,i)            per edge {x,y}, per color i
//   2. col(x,1) | ... | col(x,k)        per vertex x
//   3. -col(x,i) | -col(x,j)            per vertex x, per 1 <= i < j <= k
inline ColoringEncoding encode_coloring(const Graph &graph, std::uint32_t colors) {
  if (colors < 1) throw ContractViolation("at least one color is required");
  graph.validate();
  const VarMap map{graph.num_vertices, colors};
  std::vector<std::vector<Literal>> clauses;
  clauses.reserve(coloring_clause_count(graph.num_vertices, graph.edges.size(), colors));
  for (const auto &[x, y] : graph.edges)
    for (std::uint32_t i = 1; i <= colors; ++i)
      clauses.push_back({Literal::negative(map.var(x, i)), Literal::negative(map.var(y, i))});
  for (std::uint32_t x = 1; x <= graph.num_vertices; ++x) {
    std::vector<Literal> some_color;
    for (std::uint32_t i = 1; i <= colors; ++i) some_color.push_back(Literal::positive(map.var(x, i)));
    clauses.push_back(std::move(some_color));
  }
  for (std::uint32_t x = 1; x <= graph.num_vertices; ++x)
    for (std::uint32_t i = 1; i <= colors; ++i)
      for (std::uint32_t j = i + 1; j <= colors; ++j)
        clauses.push_back({Literal::negative(map.var(x, i)), Literal::negative(map.var(x, j))});
  ColoringEncoding out{Formula(map.num_vars(), clauses), map};
  if (out.formula.num_clauses() !=
      coloring_clause_count(graph.num_vertices, graph.edges.size(), colors))
    throw std::logic_error("coloring encoding produced an unexpected clause count");
  return out;
}

// Proper k-colorings of any 2-tree on p vertices: k(k-1)(k-2)^(p-2).
inline std::uint64_t two_tree_coloring_count(std::uint32_t p, std::uint32_t k) {
  if (k < 2) return 0;
  std::uint64_t count = static_cast<std::uint64_t>(k) * (k - 1);
  for (std::uint32_t i = 2; i < p; ++i) count *= (k - 2);
  return count;
}

inline Graph complete_graph(std::uint32_t n) {
  Graph g;
  g.num_vertices = n;
  for (std::uint32_t a = 1; a <= n; ++a)
    for (std::uint32_t b = a + 1; b <= n; ++b) g.edges.push_back({a, b});
  return g;
}

// DIMACS graph format: "p edge <n> <m>" then one "e <a> <b>" per edge.
inline void write_graph(std::ostream &out, const Graph &g,
                        const std::vector<std::string> &comments = {}) {
  for (const auto &comment : comments) out << "c " << comment << '\n';
  out << "p edge " << g.num_vertices << ' ' << g.edges.size() << '\n';
  for (const auto &[a, b] : g.edges) out << "e " << a << ' ' << b << '\n';
}

inline Graph read_graph(std::istream &in) {
  Graph g;
  std::string line;
  std::size_t lineno = 0;
  std::size_t declared_edges = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (have_header || !(fields >> kind >> g.num_vertices >> declared_edges) || kind != "edge")
        throw ParseError(lineno, "malformed header, expected 'p edge <n> <m>'");
      have_header = true;
    } else if (tag == "e") {
      std::uint32_t a = 0, b = 0;
      if (!have_header || !(fields >> a >> b) || a == 0 || b == 0 || a > g.num_vertices ||
          b > g.num_vertices || a == b)
        throw ParseError(lineno, "malformed edge line");
      g.edges.push_back(Graph::make_edge(a, b));
    } else {
      throw ParseError(lineno, "unexpected line '" + line + "'");
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p edge' header");
  if (g.edges.size() != declared_edges)
    throw ParseError(lineno, "header declares " + std::to_string(declared_edges) +
                                 " edges but " + std::to_string(g.edges.size()) + " found");
  try {
    g.validate();
  } catch (const ContractViolation &e) {
    throw ParseError(lineno, e.what());
  }
  return g;
}

}  // namespace gsat
