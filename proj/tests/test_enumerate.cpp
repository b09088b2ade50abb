#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "doctest.h"
#include "holant/enumerate.hpp"

using namespace holant;

namespace {

// Second, unpruned generator: every bijection of every balanced multiset,
// grouped into isomorphism classes by brute-force canonical forms.
using EdgeKey = std::tuple<int, int, int, int>;
using StubKey = std::tuple<int, int, int>;

struct Flat {
  std::vector<std::string> sig;
  std::vector<EdgeKey> edges;
  std::vector<StubKey> left, right;
};

Flat flatten(const SignatureGrid& g, const std::vector<int>& perm) {
  Flat f;
  f.sig.resize(g.vertices.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v) f.sig[static_cast<std::size_t>(perm[v])] = g.vertices[v].sig;
  for (const auto& e : g.edges) {
    f.edges.emplace_back(perm[static_cast<std::size_t>(e.contra.vertex)], e.contra.port,
                         perm[static_cast<std::size_t>(e.co.vertex)], e.co.port);
  }
  std::sort(f.edges.begin(), f.edges.end());
  // Wires are identified by the position of their right end.
  auto key = [&](const Stub& s, bool left) -> StubKey {
    if (!s.is_wire()) return {perm[static_cast<std::size_t>(s.vertex)], s.port, -1};
    const auto& other = left ? g.right_dangling : g.left_dangling;
    const auto pos = std::find(other.begin(), other.end(), s) - other.begin();
    return {-1, 0, static_cast<int>(pos)};
  };
  for (const auto& s : g.left_dangling) f.left.push_back(key(s, true));
  for (const auto& s : g.right_dangling) f.right.push_back(key(s, false));
  return f;
}

std::vector<int> encode(const Flat& f, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : f.sig) out.push_back(static_cast<int>(std::find(names.begin(), names.end(), n) - names.begin()));
  for (const auto& [a, b, c, d] : f.edges) out.insert(out.end(), {a, b, c, d});
  for (const auto* side : {&f.left, &f.right}) {
    out.push_back(-7);
    for (const auto& [a, b, c] : *side) out.insert(out.end(), {a, b, c});
  }
  return out;
}

// Least encoding over every signature-preserving relabelling of vertices.
std::vector<int> brute_canonical(const SignatureGrid& g, const std::vector<std::string>& names) {
  std::vector<int> perm(g.vertices.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    bool ok = true;
    for (std::size_t v = 0; v < perm.size() && ok; ++v) {
      ok = g.vertices[v].sig == g.vertices[static_cast<std::size_t>(perm[v])].sig;
    }
    if (!ok) continue;
    auto code = encode(flatten(g, perm), names);
    if (best.empty() || code < best) best = code;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::size_t oracle_count(const std::vector<SigSlot>& sigs, Shape profile, int max_vertices, bool closed_grids) {
  std::set<std::vector<int>> reps;
  std::vector<std::string> names;
  for (const auto& x : sigs) names.push_back(x.name);
  std::function<void(std::size_t, std::vector<int>&, int)> rec = [&](std::size_t c, std::vector<int>& counts,
                                                                      int left) {
    if (c < sigs.size()) {
      for (int k = 0; k <= left; ++k) {
        counts[c] = k;
        rec(c + 1, counts, left - k);
      }
      return;
    }
    SignatureGrid base;
    base.q = 2;
    std::vector<std::pair<int, int>> lports, rports;  // (vertex or -1, port or terminal)
    for (std::size_t s = 0; s < sigs.size(); ++s) {
      for (int k = 0; k < counts[s]; ++k) {
        const int v = base.add_vertex(sigs[s].name, sigs[s].shape);
        for (int i = 1; i <= sigs[s].shape.left; ++i) lports.push_back({v, i});
        for (int j = 1; j <= sigs[s].shape.right; ++j) rports.push_back({v, sigs[s].shape.left + j});
      }
    }
    for (int t = 0; t < profile.right; ++t) lports.push_back({-1, t});
    for (int t = 0; t < profile.left; ++t) rports.push_back({-1, t});
    if (lports.size() != rports.size()) return;
    std::vector<std::size_t> match(rports.size());
    std::iota(match.begin(), match.end(), 0);
    do {
      SignatureGrid g = base;
      g.left_dangling.assign(static_cast<std::size_t>(profile.left), Stub{});
      g.right_dangling.assign(static_cast<std::size_t>(profile.right), Stub{});
      for (std::size_t l = 0; l < lports.size(); ++l) {
        const auto [lv, lp] = lports[l];
        const auto [rv, rp] = rports[match[l]];
        if (lv >= 0 && rv >= 0) {
          g.edges.push_back({{lv, lp}, {rv, rp}});
        } else if (lv >= 0) {
          g.left_dangling[static_cast<std::size_t>(rp)] = Stub::at(lv, lp);
        } else if (rv >= 0) {
          g.right_dangling[static_cast<std::size_t>(lp)] = Stub::at(rv, rp);
        } else {
          const int w = g.wires++;
          g.left_dangling[static_cast<std::size_t>(rp)] = Stub::of_wire(w);
          g.right_dangling[static_cast<std::size_t>(lp)] = Stub::of_wire(w);
        }
      }
      if (!closed_grids && !(profile == Shape{0, 0}) && has_closed_component(g)) continue;
      reps.insert(brute_canonical(g, names));
    } while (std::next_permutation(match.begin(), match.end()));
  };
  for (int n = 0; n <= max_vertices; ++n) {
    std::vector<int> counts(sigs.size(), 0);
    rec(0, counts, n);
  }
  return closed_grids ? 2 * reps.size() : reps.size();
}

}  // namespace

TEST_CASE("trivial enumerations") {
  auto g = enumerate_grids(2, {}, 0);
  REQUIRE(g.size() == 2);
  CHECK(g[0].vertices.empty());
  CHECK(g[0].loops == 0);
  CHECK(g[1].loops == 1);

  auto pairs = enumerate_grids(2, {{"u", {1, 0}}, {"w", {0, 1}}}, 2);
  bool found = false;
  for (const auto& x : pairs) {
    if (x.vertices.size() == 2 && x.edges.size() == 1) found = true;
    CHECK(x.vertices.size() != 1);
  }
  CHECK(found);

  auto wires = enumerate_gadgets(3, {}, {1, 1}, 5);
  REQUIRE(wires.size() == 1);
  CHECK(wires[0].wires == 1);
  CHECK(enumerate_gadgets(3, {}, {2, 2}, 0).size() == 2);
  CHECK(enumerate_gadgets(3, {}, {2, 1}, 4).empty());
}

TEST_CASE("enumeration matches the unpruned generator") {
  const std::vector<SigSlot> ex{{"ne", {2, 0}}, {"F", {0, 4}}};
  CHECK(enumerate_grids(2, ex, 6).size() == oracle_count(ex, {0, 0}, 6, true));
  CHECK(enumerate_gadgets(2, ex, {0, 4}, 6).size() == oracle_count(ex, {0, 4}, 6, false));
  CHECK(enumerate_gadgets(2, ex, {4, 0}, 6).size() == oracle_count(ex, {4, 0}, 6, false));

  const std::vector<SigSlot> mixed{{"A", {1, 1}}, {"B", {2, 1}}, {"C", {0, 1}}};
  CHECK(enumerate_grids(2, mixed, 4).size() == oracle_count(mixed, {0, 0}, 4, true));
  CHECK(enumerate_gadgets(2, mixed, {1, 1}, 3).size() == oracle_count(mixed, {1, 1}, 3, false));
  CHECK(enumerate_gadgets(2, mixed, {0, 0}, 3).size() == oracle_count(mixed, {0, 0}, 3, false));

  const std::vector<SigSlot> mat{{"M", {1, 1}}};
  // Closed grids over one matrix are multisets of cycles: partitions of n.
  CHECK(enumerate_grids(2, mat, 5).size() == 2 * (1 + 1 + 2 + 3 + 5 + 7));
  // (1,1)-gadgets are a path M^k, possibly with extra cycles, which are excluded.
  CHECK(enumerate_gadgets(2, mat, {1, 1}, 4).size() == 5);
}

TEST_CASE("enumeration is deterministic and respects bounds") {
  const std::vector<SigSlot> ex{{"ne", {2, 0}}, {"F", {0, 4}}, {"M", {1, 1}}};
  auto a = enumerate_grids(2, ex, 4);
  auto b = enumerate_grids(2, ex, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].edges.size() == b[k].edges.size());
    CHECK(a[k].vertices.size() == b[k].vertices.size());
    CHECK(a[k].loops == b[k].loops);
    CHECK(a[k].vertices.size() <= 4);
    CHECK(a[k].closed());
    a[k].validate();
  }
  for (int n = 0; n < 4; ++n) {
    CHECK(enumerate_gadgets(2, ex, {0, 2}, n).size() <= enumerate_gadgets(2, ex, {0, 2}, n + 1).size());
  }
  for (const auto& g : enumerate_gadgets(2, ex, {2, 2}, 3)) {
    g.validate();
    CHECK(!has_closed_component(g));
  }
  std::size_t seen = 0;
  enumerate_grids(2, ex, 4, [&](const SignatureGrid&) { return ++seen < 3; });
  CHECK(seen == 3);
  EnumerateOptions cap;
  cap.max_results = 5;
  CHECK_THROWS_AS(enumerate_grids(2, ex, 4, cap), HolantError);
}
