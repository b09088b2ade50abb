#pragma once

// Graph homomorphisms and matchings as Holant values, and bounded-degree
// homomorphism indistinguishability.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holant/grid.hpp"

namespace holant {

struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  bool allow_loops = false;

  SimpleGraph() = default;
  SimpleGraph(int n, std::vector<std::pair<int, int>> edges, bool allow_loops = false);

  /// Throws on out-of-range endpoints, duplicate edges or forbidden loops.
  void validate() const;
  int degree(int v) const;
  int max_degree() const;
  bool connected() const;
  /// 0/1 matrix; a loop puts a 1 on the diagonal.
  std::vector<std::vector<int>> adjacency() const;

  static SimpleGraph path(int n);
  static SimpleGraph cycle(int n);
  static SimpleGraph complete(int n);
  static SimpleGraph star(int leaves);
};

SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b);
/// Vertex v of g becomes perm[v].
SimpleGraph relabel(const SimpleGraph& g, const std::vector<int>& perm);

/// Isomorphism-invariant code (minimum over degree-refined relabelings of
/// the upper-triangle adjacency bits). Connected or not; n <= 10.
std::uint64_t canonical_code(const SimpleGraph& g);
bool isomorphic(const SimpleGraph& a, const SimpleGraph& b);

std::string equality_name(int arity);
inline constexpr const char* kAdjacencyName = "A";

/// EQ-vertices (contravariant) for the vertices of x, one covariant "A"
/// vertex per edge. An isolated vertex becomes a vertexless loop, which
/// contributes the factor q.
SignatureGrid hom_grid(const SimpleGraph& x, int q);
/// Equalities of arity 1..max_degree plus the adjacency matrix of g.
SignatureSet hom_signatures(const SimpleGraph& g, int max_degree);

enum class HomMethod { holant, brute };

/// Exact count. The Holant route rounds and throws if the value is more than
/// 1e-6 away from a non-negative integer; brute force is capped at 1e8 maps.
std::uint64_t hom_count(const SimpleGraph& x, const SimpleGraph& g, HomMethod method = HomMethod::holant);

/// Boolean signatures "M<k>" of shape (k,0) for k = 0..max_arity that accept
/// at most one (perfect: exactly one) input 1, plus a covariant "eq2".
SignatureSet matchings_signatures(int max_arity, bool perfect);
/// Grid over matchings_signatures: an M vertex per graph vertex, an eq2
/// vertex subdividing every edge.
SignatureGrid matchings_grid(const SimpleGraph& x);

/// Connected graphs with maximum degree <= max_degree and 1..max_vertices
/// vertices, one per isomorphism class, ordered by size then canonical code.
std::vector<SimpleGraph> connected_graphs(int max_vertices, int max_degree);

struct HomDistinguisher {
  SimpleGraph x;
  std::uint64_t count_f = 0;
  std::uint64_t count_g = 0;
};

struct HomDistReport {
  bool indistinguishable = true;
  std::size_t graphs_checked = 0;
  std::optional<HomDistinguisher> distinguisher;
};

HomDistReport bounded_degree_distinguisher(const SimpleGraph& f, const SimpleGraph& g, int max_degree,
                                           int max_left_vertices);

struct AdjacencyPairResult {
  bool skipped = false;
  std::string reason;
  bool found = false;
  std::optional<HomDistinguisher> distinguisher;
};

/// Degree-3 search for every non-isomorphic pair whose adjacency matrices
/// are both nonsingular; other pairs are skipped with a reason.
std::vector<AdjacencyPairResult> invertible_adjacency_experiment(
    const std::vector<std::pair<SimpleGraph, SimpleGraph>>& pairs, int max_left_vertices);

bool nonsingular_adjacency(const SimpleGraph& g);

/// Non-isomorphic pairs of graphs on 2..max_vertices vertices with equal
/// adjacency spectra, optionally restricted to nonsingular adjacency.
std::vector<std::pair<SimpleGraph, SimpleGraph>> cospectral_pairs(int max_vertices, bool nonsingular_only);

}  // namespace holant
