#include "holant/hom.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "holant/parallel.hpp"

namespace holant {

SimpleGraph::SimpleGraph(int n_, std::vector<std::pair<int, int>> edges_, bool allow_loops_)
    : n(n_), edges(std::move(edges_)), allow_loops(allow_loops_) {
  validate();
}

void SimpleGraph::validate() const {
  if (n < 0) throw HolantError("graph has a negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw HolantError("graph edge endpoint out of range");
    if (u == v && !allow_loops) throw HolantError("graph has a self-loop but loops are not allowed");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw HolantError("graph has a duplicate edge");
  }
}

int SimpleGraph::degree(int v) const {
  int d = 0;
  for (auto [a, b] : edges) d += (a == v) + (b == v);
  return d;
}

int SimpleGraph::max_degree() const {
  int d = 0;
  for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
  return d;
}

bool SimpleGraph::connected() const {
  if (n <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  int parts = n;
  for (auto [u, v] : edges) {
    const int a = find(u), b = find(v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --parts;
    }
  }
  return parts == 1;
}

std::vector<std::vector<int>> SimpleGraph::adjacency() const {
  std::vector<std::vector<int>> a(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (auto [u, v] : edges) {
    a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    a[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
  }
  return a;
}

SimpleGraph SimpleGraph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return SimpleGraph(n, std::move(e));
}

SimpleGraph SimpleGraph::cycle(int n) {
  if (n < 3) throw HolantError("cycles need at least 3 vertices");
  auto g = path(n);
  g.edges.push_back({n - 1, 0});
  return g;
}

SimpleGraph SimpleGraph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.push_back({u, v});
  return SimpleGraph(n, std::move(e));
}

SimpleGraph SimpleGraph::star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v <= leaves; ++v) e.push_back({0, v});
  return SimpleGraph(leaves + 1, std::move(e));
}

SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b) {
  SimpleGraph g = a;
  g.n = a.n + b.n;
  g.allow_loops = a.allow_loops || b.allow_loops;
  for (auto [u, v] : b.edges) g.edges.push_back({u + a.n, v + a.n});
  return g;
}

SimpleGraph relabel(const SimpleGraph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.n) throw HolantError("relabeling has the wrong length");
  SimpleGraph out = g;
  for (auto& [u, v] : out.edges) {
    u = perm[static_cast<std::size_t>(u)];
    v = perm[static_cast<std::size_t>(v)];
  }
  out.validate();
  return out;
}

namespace {

// Stable colour refinement started from degrees; colours are ranks, so
// isomorphic graphs get matching colour classes.
std::vector<int> refined_colors(const SimpleGraph& g, const std::vector<std::vector<int>>& adj) {
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<int> color(n);
  for (std::size_t v = 0; v < n; ++v) {
    color[v] = g.degree(static_cast<int>(v)) * 2 + adj[v][v];
  }
  for (std::size_t round = 0; round < n; ++round) {
    std::vector<std::pair<int, std::vector<int>>> sig(n);
    for (std::size_t v = 0; v < n; ++v) {
      sig[v].first = color[v];
      for (std::size_t u = 0; u < n; ++u)
        if (adj[v][u] && u != v) sig[v].second.push_back(color[u]);
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    auto sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      next[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
    }
    const auto classes = [](const std::vector<int>& c) { return std::set<int>(c.begin(), c.end()).size(); };
    const bool stable = classes(next) == classes(color);
    color = std::move(next);
    if (stable) break;
  }
  return color;
}

std::uint64_t bit(int i, int j) {
  if (i > j) std::swap(i, j);
  // Earlier slots take the high bits so prefixes compare like whole codes.
  return std::uint64_t{1} << (63 - (j * (j + 1) / 2 + i));
}

}  // namespace

std::uint64_t canonical_code(const SimpleGraph& g) {
  if (g.n > 10) throw HolantError("canonical codes support at most 10 vertices");
  const auto adj = g.adjacency();
  const auto color = refined_colors(g, adj);
  const auto n = static_cast<std::size_t>(g.n);
  // Positions are handed out class by class in colour order.
  std::vector<int> slot_color(n);
  {
    auto c = color;
    std::sort(c.begin(), c.end());
    slot_color = c;
  }
  std::vector<bool> used(n, false);
  std::uint64_t best = ~std::uint64_t{0};
  std::vector<int> at_slot(n);
  // Depth-first over class-respecting bijections, pruning on the prefix.
  auto rec = [&](auto&& self, std::size_t slot, std::uint64_t code) -> void {
    if (slot == n) {
      best = std::min(best, code);
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v] || color[v] != slot_color[slot]) continue;
      std::uint64_t c = code;
      if (adj[v][v]) c |= bit(static_cast<int>(slot), static_cast<int>(slot));
      for (std::size_t s = 0; s < slot; ++s) {
        if (adj[v][static_cast<std::size_t>(at_slot[s])]) c |= bit(static_cast<int>(s), static_cast<int>(slot));
      }
      const int fixed = static_cast<int>((slot + 1) * (slot + 2) / 2);
      const std::uint64_t mask = ~std::uint64_t{0} << (64 - fixed);
      if ((c & mask) > (best & mask)) continue;
      used[v] = true;
      at_slot[slot] = static_cast<int>(v);
      self(self, slot + 1, c);
      used[v] = false;
    }
  };
  rec(rec, 0, 0);
  return n == 0 ? 0 : best;
}

bool isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  return canonical_code(a) == canonical_code(b);
}

std::string equality_name(int arity) { return "EQ" + std::to_string(arity); }

SignatureGrid hom_grid(const SimpleGraph& x, int q) {
  x.validate();
  SignatureGrid g;
  g.q = q;
  std::vector<int> vid(static_cast<std::size_t>(x.n), -1), next(static_cast<std::size_t>(x.n), 1);
  for (int v = 0; v < x.n; ++v) {
    const int d = x.degree(v);
    if (d == 0) {
      ++g.loops;
    } else {
      vid[static_cast<std::size_t>(v)] = g.add_vertex(equality_name(d), {d, 0});
    }
  }
  for (auto [u, v] : x.edges) {
    const int a = g.add_vertex(kAdjacencyName, {0, 2});
    g.connect(vid[static_cast<std::size_t>(u)], next[static_cast<std::size_t>(u)]++, a, 1);
    g.connect(vid[static_cast<std::size_t>(v)], next[static_cast<std::size_t>(v)]++, a, 2);
  }
  return g;
}

SignatureSet hom_signatures(const SimpleGraph& g, int max_degree) {
  g.validate();
  if (g.n < 1) throw HolantError("target graph needs at least one vertex");
  SignatureSet s(g.n);
  for (int d = 1; d <= max_degree; ++d) s.add(equality_name(d), equality_signature(g.n, d, {d, 0}));
  std::vector<Complex> a;
  for (const auto& row : g.adjacency())
    for (int x : row) a.push_back(x);
  s.add(kAdjacencyName, MixedTensor(g.n, {0, 2}, std::move(a)));
  return s;
}

namespace {

std::uint64_t rounded_count(Complex v) {
  const double r = std::round(v.real());
  if (std::abs(v.real() - r) > 1e-6 || std::abs(v.imag()) > 1e-6 || r < 0) {
    throw HolantError("numerical alarm: count " + std::to_string(v.real()) + "+" + std::to_string(v.imag()) +
                      "i is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t hom_brute(const SimpleGraph& x, const SimpleGraph& g) {
  double maps = 1;
  for (int k = 0; k < x.n; ++k) maps *= g.n;
  if (maps > 1e8) throw HolantError("brute-force homomorphism count needs more than 1e8 maps");
  const auto adj = g.adjacency();
  std::vector<int> f(static_cast<std::size_t>(x.n), 0);
  std::uint64_t count = 0;
  if (x.n > 0 && g.n == 0) return 0;
  while (true) {
    bool ok = true;
    for (auto [u, v] : x.edges) {
      if (!adj[static_cast<std::size_t>(f[static_cast<std::size_t>(u)])][static_cast<std::size_t>(f[static_cast<std::size_t>(v)])]) {
        ok = false;
        break;
      }
    }
    count += ok;
    std::size_t k = 0;
    while (k < f.size() && ++f[k] == g.n) f[k++] = 0;
    if (k == f.size()) break;
  }
  return count;
}

}  // namespace

std::uint64_t hom_count(const SimpleGraph& x, const SimpleGraph& g, HomMethod method) {
  x.validate();
  g.validate();
  if (method == HomMethod::brute) return hom_brute(x, g);
  if (g.n == 0) return x.n == 0 ? 1 : 0;
  const auto sigs = hom_signatures(g, std::max(1, x.max_degree()));
  return rounded_count(holant_eval_contracted(hom_grid(x, g.n), sigs));
}

SignatureSet matchings_signatures(int max_arity, bool perfect) {
  if (max_arity < 1) throw HolantError("matchings signatures need max_arity >= 1");
  SignatureSet s(2);
  for (int k = 0; k <= max_arity; ++k) {
    std::vector<Complex> f(static_cast<std::size_t>(k + 1), 0.0);
    if (!perfect) f[0] = 1;
    if (k >= 1) f[1] = 1;
    s.add("M" + std::to_string(k), SymBoolSignature{f, {k, 0}}.expand());
  }
  s.add("eq2", equality_signature(2, 2, {0, 2}));
  return s;
}

SignatureGrid matchings_grid(const SimpleGraph& x) {
  x.validate();
  for (auto [u, v] : x.edges)
    if (u == v) throw HolantError("matchings grid needs a loopless graph");
  SignatureGrid g;
  g.q = 2;
  std::vector<int> next(static_cast<std::size_t>(x.n), 1);
  for (int v = 0; v < x.n; ++v) {
    const int d = x.degree(v);
    g.add_vertex("M" + std::to_string(d), {d, 0});
  }
  for (auto [u, v] : x.edges) {
    const int e = g.add_vertex("eq2", {0, 2});
    g.connect(u, next[static_cast<std::size_t>(u)]++, e, 1);
    g.connect(v, next[static_cast<std::size_t>(v)]++, e, 2);
  }
  return g;
}

namespace {

// Adds a new vertex joined to every subset of the old vertices that passes
// `keep`; one representative per isomorphism class, sorted by code.
template <class Keep>
std::vector<SimpleGraph> extend(const std::vector<SimpleGraph>& level, Keep keep) {
  std::map<std::uint64_t, SimpleGraph> out;
  for (const auto& g : level) {
    const int n = g.n;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      SimpleGraph h = g;
      h.n = n + 1;
      for (int v = 0; v < n; ++v)
        if (mask >> v & 1) h.edges.push_back({v, n});
      if (!keep(h)) continue;
      const auto code = canonical_code(h);
      out.emplace(code, std::move(h));
    }
  }
  std::vector<SimpleGraph> v;
  for (auto& [code, g] : out) v.push_back(std::move(g));
  return v;
}

std::vector<std::vector<SimpleGraph>> graphs_by_size(int max_vertices, int max_degree, bool connected_only) {
  std::vector<std::vector<SimpleGraph>> levels;
  if (max_vertices < 1) return levels;
  levels.push_back({SimpleGraph(1, {})});
  for (int n = 2; n <= max_vertices; ++n) {
    levels.push_back(extend(levels.back(), [&](const SimpleGraph& h) {
      if (connected_only && h.degree(h.n - 1) == 0) return false;
      for (int v = 0; v < h.n; ++v)
        if (h.degree(v) > max_degree) return false;
      return true;
    }));
  }
  return levels;
}

}  // namespace

std::vector<SimpleGraph> connected_graphs(int max_vertices, int max_degree) {
  std::vector<SimpleGraph> out;
  for (auto& level : graphs_by_size(max_vertices, max_degree, true)) {
    for (auto& g : level) out.push_back(std::move(g));
  }
  return out;
}

HomDistReport bounded_degree_distinguisher(const SimpleGraph& f, const SimpleGraph& g, int max_degree,
                                           int max_left_vertices) {
  if (max_degree < 1) throw HolantError("max degree must be at least 1");
  f.validate();
  g.validate();
  HomDistReport r;
  for (const auto& level : graphs_by_size(max_left_vertices, max_degree, true)) {
    std::vector<std::uint64_t> cf(level.size()), cg(level.size());
    parallel_for(level.size(), [&](std::size_t i) {
      cf[i] = hom_count(level[i], f);
      cg[i] = hom_count(level[i], g);
    });
    for (std::size_t i = 0; i < level.size(); ++i) {
      ++r.graphs_checked;
      if (cf[i] != cg[i]) {
        r.indistinguishable = false;
        r.distinguisher = HomDistinguisher{level[i], cf[i], cg[i]};
        return r;
      }
    }
  }
  return r;
}

namespace {

Eigen::VectorXd spectrum(const SimpleGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
  for (auto [u, v] : g.edges) a(u, v) = a(v, u) = 1;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

bool nonsingular_adjacency(const SimpleGraph& g) {
  if (g.n == 0) return true;
  return spectrum(g).cwiseAbs().minCoeff() > 1e-8;
}

std::vector<AdjacencyPairResult> invertible_adjacency_experiment(
    const std::vector<std::pair<SimpleGraph, SimpleGraph>>& pairs, int max_left_vertices) {
  std::vector<AdjacencyPairResult> out;
  for (const auto& [f, g] : pairs) {
    AdjacencyPairResult r;
    if (!nonsingular_adjacency(f) || !nonsingular_adjacency(g)) {
      r.skipped = true;
      r.reason = "singular adjacency matrix";
    } else if (isomorphic(f, g)) {
      r.skipped = true;
      r.reason = "isomorphic";
    } else {
      const auto rep = bounded_degree_distinguisher(f, g, 3, max_left_vertices);
      r.found = !rep.indistinguishable;
      r.distinguisher = rep.distinguisher;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<SimpleGraph, SimpleGraph>> cospectral_pairs(int max_vertices, bool nonsingular_only) {
  std::vector<std::pair<SimpleGraph, SimpleGraph>> out;
  const auto levels = graphs_by_size(max_vertices, max_vertices, false);
  for (const auto& level : levels) {
    if (level.empty() || level[0].n < 2) continue;
    std::vector<std::pair<Eigen::VectorXd, std::size_t>> spectra;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (nonsingular_only && !nonsingular_adjacency(level[i])) continue;
      spectra.push_back({spectrum(level[i]), i});
    }
    std::sort(spectra.begin(), spectra.end(), [](const auto& a, const auto& b) {
      for (Eigen::Index k = 0; k < a.first.size(); ++k) {
        if (std::abs(a.first(k) - b.first(k)) > 1e-7) return a.first(k) < b.first(k);
      }
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      for (std::size_t j = i + 1; j < spectra.size(); ++j) {
        if ((spectra[i].first - spectra[j].first).cwiseAbs().maxCoeff() > 1e-7) break;
        out.push_back({level[spectra[i].second], level[spectra[j].second]});
      }
    }
  }
  return out;
}

}  // namespace holant
