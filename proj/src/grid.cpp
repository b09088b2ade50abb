#include "holant/grid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace holant {

SignatureSet::SignatureSet(std::vector<Entry> entries) {
  for (auto& e : entries) add(std::move(e.name), std::move(e.tensor));
}

void SignatureSet::add(std::string name, MixedTensor tensor) {
  if (contains(name)) throw HolantError("duplicate signature name '" + name + "'");
  if (q().has_value() && *q() != tensor.q()) {
    throw HolantError("signature '" + name + "' is on a different domain than the rest of the set");
  }
  entries_.push_back({std::move(name), std::move(tensor)});
}

const MixedTensor* SignatureSet::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e.tensor;
  }
  return nullptr;
}

const MixedTensor& SignatureSet::at(std::string_view name) const {
  const auto* t = find(name);
  if (!t) throw HolantError("unbound signature '" + std::string(name) + "'");
  return *t;
}

std::optional<int> SignatureSet::q() const {
  if (q_) return q_;
  if (entries_.empty()) return std::nullopt;
  return entries_.front().tensor.q();
}

bool is_contra_port(const GridVertex& v, int port) { return port >= 1 && port <= v.shape.left; }

int SignatureGrid::add_vertex(std::string sig, Shape shape) {
  vertices.push_back({std::move(sig), shape});
  return static_cast<int>(vertices.size()) - 1;
}

void SignatureGrid::connect(int contra_vertex, int i, int co_vertex, int j) {
  const int offset = vertices.at(static_cast<std::size_t>(co_vertex)).shape.left;
  edges.push_back({{contra_vertex, i}, {co_vertex, offset + j}});
}

namespace {

struct PortKey {
  int vertex;
  int port;
  auto operator<=>(const PortKey&) const = default;
};

std::string port_name(PortRef p) {
  return "vertex " + std::to_string(p.vertex) + " port " + std::to_string(p.port);
}

}  // namespace

void SignatureGrid::validate() const {
  if (q < 1) throw HolantError("grid domain size must be positive");
  if (loops < 0 || wires < 0) throw HolantError("negative loop or wire count");
  std::set<PortKey> used;
  const auto nv = static_cast<int>(vertices.size());
  auto use = [&](PortRef p, bool want_contra) {
    if (p.vertex < 0 || p.vertex >= nv) throw HolantError("reference to missing " + port_name(p));
    const auto& v = vertices[static_cast<std::size_t>(p.vertex)];
    if (p.port < 1 || p.port > v.shape.arity()) throw HolantError("reference to missing " + port_name(p));
    if (is_contra_port(v, p.port) != want_contra) {
      throw HolantError(port_name(p) + (want_contra ? " is covariant but used as a contravariant end"
                                                    : " is contravariant but used as a covariant end"));
    }
    if (!used.insert({p.vertex, p.port}).second) throw HolantError(port_name(p) + " is used twice");
  };
  for (const auto& e : edges) {
    use(e.contra, true);
    use(e.co, false);
  }
  std::vector<int> wire_left(static_cast<std::size_t>(wires), 0), wire_right(static_cast<std::size_t>(wires), 0);
  auto use_stub = [&](const Stub& s, bool left_side) {
    if (s.is_wire()) {
      if (s.wire >= wires) throw HolantError("reference to missing wire " + std::to_string(s.wire));
      ++(left_side ? wire_left : wire_right)[static_cast<std::size_t>(s.wire)];
    } else {
      use(s.ref(), left_side);
    }
  };
  for (const auto& s : left_dangling) use_stub(s, true);
  for (const auto& s : right_dangling) use_stub(s, false);
  for (int w = 0; w < wires; ++w) {
    if (wire_left[static_cast<std::size_t>(w)] != 1 || wire_right[static_cast<std::size_t>(w)] != 1) {
      throw HolantError("wire " + std::to_string(w) + " must have exactly one left and one right end");
    }
  }
  std::size_t total_ports = 0;
  for (const auto& v : vertices) total_ports += static_cast<std::size_t>(v.shape.arity());
  if (used.size() != total_ports) throw HolantError("grid leaves some vertex ports unconnected");
}

ComponentInfo components(const SignatureGrid& g) {
  const auto nv = g.vertices.size();
  const std::size_t n = nv + static_cast<std::size_t>(g.wires);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    parent[root(static_cast<std::size_t>(e.contra.vertex))] = root(static_cast<std::size_t>(e.co.vertex));
  }
  ComponentInfo info;
  std::vector<int> id(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    const auto r = root(x);
    if (id[r] < 0) id[r] = info.count++;
  }
  info.vertex_component.resize(nv);
  for (std::size_t x = 0; x < nv; ++x) info.vertex_component[x] = id[root(x)];
  info.has_dangling.assign(static_cast<std::size_t>(info.count), false);
  for (int w = 0; w < g.wires; ++w) info.has_dangling[static_cast<std::size_t>(id[root(nv + static_cast<std::size_t>(w))])] = true;
  auto mark = [&](const Stub& s) {
    if (!s.is_wire()) info.has_dangling[static_cast<std::size_t>(info.vertex_component[static_cast<std::size_t>(s.vertex)])] = true;
  };
  for (const auto& s : g.left_dangling) mark(s);
  for (const auto& s : g.right_dangling) mark(s);
  return info;
}

bool has_closed_component(const SignatureGrid& g) {
  if (g.loops > 0) return true;
  const auto info = components(g);
  return std::find(info.has_dangling.begin(), info.has_dangling.end(), false) != info.has_dangling.end();
}

SignatureGrid wire_gadget(int q) {
  SignatureGrid g;
  g.q = q;
  g.wires = 1;
  g.left_dangling.push_back(Stub::of_wire(0));
  g.right_dangling.push_back(Stub::of_wire(0));
  return g;
}

SignatureGrid vertex_gadget(int q, std::string sig, Shape shape) {
  SignatureGrid g;
  g.q = q;
  g.add_vertex(std::move(sig), shape);
  for (int i = 1; i <= shape.left; ++i) g.left_dangling.push_back(Stub::at(0, i));
  for (int j = 1; j <= shape.right; ++j) g.right_dangling.push_back(Stub::at(0, shape.left + j));
  return g;
}

SignatureGrid loop_grid(int q, int loops) {
  SignatureGrid g;
  g.q = q;
  g.loops = loops;
  return g;
}

SignatureGrid disjoint_union(const SignatureGrid& a, const SignatureGrid& b) {
  if (a.q != b.q) throw HolantError("cannot join grids over different domains");
  SignatureGrid u = a;
  const int off = static_cast<int>(a.vertices.size());
  const int woff = a.wires;
  u.vertices.insert(u.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto e : b.edges) {
    e.contra.vertex += off;
    e.co.vertex += off;
    u.edges.push_back(e);
  }
  auto shift = [&](Stub s) {
    if (s.is_wire()) {
      s.wire += woff;
    } else {
      s.vertex += off;
    }
    return s;
  };
  for (const auto& s : b.left_dangling) u.left_dangling.push_back(shift(s));
  for (const auto& s : b.right_dangling) u.right_dangling.push_back(shift(s));
  u.wires += b.wires;
  u.loops += b.loops;
  return u;
}

namespace {

// Mutable grid with tombstoned dangling ends, used to join ends without
// index bookkeeping until the very end.
class StubJoiner {
 public:
  explicit StubJoiner(SignatureGrid g) : g_(std::move(g)), wire_alive_(static_cast<std::size_t>(g_.wires), true) {
    for (const auto& s : g_.left_dangling) left_.emplace_back(s);
    for (const auto& s : g_.right_dangling) right_.emplace_back(s);
  }

  std::size_t push_left(Stub s) {
    left_.emplace_back(s);
    return left_.size() - 1;
  }
  std::size_t push_right(Stub s) {
    right_.emplace_back(s);
    return right_.size() - 1;
  }
  const std::optional<Stub>& left(std::size_t i) const { return left_.at(i); }
  std::optional<Stub>& left_slot(std::size_t i) { return left_.at(i); }
  std::optional<Stub>& right_slot(std::size_t i) { return right_.at(i); }
  SignatureGrid& grid() { return g_; }

  /// Joins left end `a` and right end `b` into one edge (or wire, or loop).
  void join(std::size_t a, std::size_t b) {
    if (a >= left_.size() || b >= right_.size() || !left_[a] || !right_[b]) {
      throw HolantError("dangling end is missing or already connected");
    }
    const Stub ls = *left_[a];
    const Stub rs = *right_[b];
    left_[a].reset();
    right_[b].reset();
    if (!ls.is_wire() && !rs.is_wire()) {
      g_.edges.push_back({ls.ref(), rs.ref()});
    } else if (ls.is_wire() && !rs.is_wire()) {
      // The wire's far (right) end now attaches to the covariant port.
      *find_end(right_, ls.wire) = rs;
      kill(ls.wire);
    } else if (!ls.is_wire() && rs.is_wire()) {
      *find_end(left_, rs.wire) = ls;
      kill(rs.wire);
    } else if (ls.wire == rs.wire) {
      ++g_.loops;
      kill(ls.wire);
    } else {
      // Wire rs continues into wire ls: keep rs, retarget ls's right end.
      *find_end(right_, ls.wire) = Stub::of_wire(rs.wire);
      kill(ls.wire);
    }
  }

  SignatureGrid finish() {
    std::vector<int> remap(wire_alive_.size(), -1);
    int next = 0;
    for (std::size_t w = 0; w < wire_alive_.size(); ++w) {
      if (wire_alive_[w]) remap[w] = next++;
    }
    auto fix = [&](Stub s) {
      if (s.is_wire()) s.wire = remap[static_cast<std::size_t>(s.wire)];
      return s;
    };
    g_.left_dangling.clear();
    g_.right_dangling.clear();
    for (const auto& s : left_) {
      if (s) g_.left_dangling.push_back(fix(*s));
    }
    for (const auto& s : right_) {
      if (s) g_.right_dangling.push_back(fix(*s));
    }
    g_.wires = next;
    return std::move(g_);
  }

 private:
  std::optional<Stub>* find_end(std::vector<std::optional<Stub>>& side, int wire) {
    for (auto& s : side) {
      if (s && s->is_wire() && s->wire == wire) return &s;
    }
    throw HolantError("internal: wire end not found");
  }
  void kill(int wire) { wire_alive_[static_cast<std::size_t>(wire)] = false; }

  SignatureGrid g_;
  std::vector<bool> wire_alive_;
  std::vector<std::optional<Stub>> left_, right_;
};

}  // namespace

SignatureGrid compose(const SignatureGrid& k1, const SignatureGrid& k2,
                      const std::vector<std::pair<int, int>>& wiring) {
  const auto r1 = k1.right_dangling.size();
  const auto l1 = k1.left_dangling.size();
  const auto l2 = k2.left_dangling.size();
  std::set<int> used_right, used_left;
  for (const auto& [ri, li] : wiring) {
    if (ri < 1 || static_cast<std::size_t>(ri) > r1) throw HolantError("compose: right end " + std::to_string(ri) + " out of range");
    if (li < 1 || static_cast<std::size_t>(li) > l2) throw HolantError("compose: left end " + std::to_string(li) + " out of range");
    if (!used_right.insert(ri).second || !used_left.insert(li).second) {
      throw HolantError("compose: a dangling end is wired twice");
    }
  }
  StubJoiner j(disjoint_union(k1, k2));
  for (const auto& [ri, li] : wiring) {
    j.join(l1 + static_cast<std::size_t>(li) - 1, static_cast<std::size_t>(ri) - 1);
  }
  return j.finish();
}

SignatureGrid contract_dangling(const SignatureGrid& k, int i, int j) {
  if (i < 1 || static_cast<std::size_t>(i) > k.left_dangling.size() || j < 1 ||
      static_cast<std::size_t>(j) > k.right_dangling.size()) {
    throw HolantError("dangling contraction index out of range");
  }
  StubJoiner s(k);
  s.join(static_cast<std::size_t>(i) - 1, static_cast<std::size_t>(j) - 1);
  return s.finish();
}

SignatureGrid subdivide_edge(const SignatureGrid& g, std::size_t edge, std::string sig) {
  if (edge >= g.edges.size()) throw HolantError("edge index out of range");
  SignatureGrid out = g;
  const GridEdge e = out.edges[edge];
  const int v = out.add_vertex(std::move(sig), {1, 1});
  out.edges[edge] = {e.contra, {v, 2}};
  out.edges.push_back({{v, 1}, e.co});
  return out;
}

SignatureGrid substitute_vertex(const SignatureGrid& g, int v, const SignatureGrid& k) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.vertices.size()) throw HolantError("vertex index out of range");
  const Shape shape = g.vertices[static_cast<std::size_t>(v)].shape;
  if (k.profile() != shape) {
    throw HolantError("substituted gadget has profile " + to_string(k.profile()) + " but the vertex has shape " +
                      to_string(shape));
  }
  const std::size_t gl = g.left_dangling.size(), gr = g.right_dangling.size();
  SignatureGrid u = disjoint_union(g, k);
  std::vector<std::pair<std::size_t, std::size_t>> joins;  // (left pos, right pos)
  auto k_left = [&](int i) { return gl + static_cast<std::size_t>(i - 1); };
  auto k_right = [&](int jdx) { return gr + static_cast<std::size_t>(jdx - 1); };
  std::vector<GridEdge> edges = u.edges;
  u.edges.clear();
  StubJoiner j(u);
  for (const auto& e : edges) {
    const bool c_is_v = e.contra.vertex == v;
    const bool o_is_v = e.co.vertex == v;
    if (c_is_v && o_is_v) {
      joins.push_back({k_left(e.contra.port), k_right(e.co.port - shape.left)});
    } else if (c_is_v) {
      joins.push_back({k_left(e.contra.port), j.push_right(Stub::at(e.co.vertex, e.co.port))});
    } else if (o_is_v) {
      joins.push_back({j.push_left(Stub::at(e.contra.vertex, e.contra.port)), k_right(e.co.port - shape.left)});
    } else {
      j.grid().edges.push_back(e);
    }
  }
  for (std::size_t p = 0; p < gl; ++p) {
    const auto s = *j.left(p);
    if (!s.is_wire() && s.vertex == v) {
      j.left_slot(p) = j.left_slot(k_left(s.port));
      j.left_slot(k_left(s.port)).reset();
    }
  }
  for (std::size_t p = 0; p < gr; ++p) {
    const auto s = *j.right_slot(p);
    if (!s.is_wire() && s.vertex == v) {
      const auto from = k_right(s.port - shape.left);
      j.right_slot(p) = j.right_slot(from);
      j.right_slot(from).reset();
    }
  }
  for (const auto& [a, b] : joins) j.join(a, b);
  SignatureGrid out = j.finish();
  // Drop vertex v and renumber the rest.
  out.vertices.erase(out.vertices.begin() + v);
  auto renum = [&](int x) { return x > v ? x - 1 : x; };
  for (auto& e : out.edges) {
    e.contra.vertex = renum(e.contra.vertex);
    e.co.vertex = renum(e.co.vertex);
  }
  for (auto* side : {&out.left_dangling, &out.right_dangling}) {
    for (auto& s : *side) {
      if (!s.is_wire()) s.vertex = renum(s.vertex);
    }
  }
  return out;
}

SignatureGrid rename_signatures(const SignatureGrid& g, const std::map<std::string, std::string>& mapping) {
  SignatureGrid out = g;
  for (auto& v : out.vertices) {
    if (auto it = mapping.find(v.sig); it != mapping.end()) v.sig = it->second;
  }
  return out;
}

void check_bindings(const SignatureGrid& g, const SignatureSet& sigs) {
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    const auto* t = sigs.find(v.sig);
    if (!t) throw HolantError("unbound signature '" + v.sig + "' at vertex " + std::to_string(i));
    if (t->shape() != v.shape) {
      throw HolantError("vertex " + std::to_string(i) + " expects shape " + to_string(v.shape) + " but '" + v.sig +
                        "' has shape " + to_string(t->shape()));
    }
    if (t->q() != g.q) throw HolantError("signature '" + v.sig + "' is on a different domain than the grid");
  }
}

TensorNetwork to_network(const SignatureGrid& g, const SignatureSet& sigs) {
  g.validate();
  check_bindings(g, sigs);
  TensorNetwork net;
  net.q = g.q;
  std::vector<std::vector<int>> labels(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    labels[i].assign(static_cast<std::size_t>(g.vertices[i].shape.arity()), -1);
  }
  int next = 0;
  for (const auto& e : g.edges) {
    labels[static_cast<std::size_t>(e.contra.vertex)][static_cast<std::size_t>(e.contra.port - 1)] = next;
    labels[static_cast<std::size_t>(e.co.vertex)][static_cast<std::size_t>(e.co.port - 1)] = next;
    ++next;
  }
  std::vector<int> wire_left(static_cast<std::size_t>(g.wires)), wire_right(static_cast<std::size_t>(g.wires));
  auto place = [&](const Stub& s, std::vector<int>& wire_end) {
    const int l = next++;
    net.open.push_back(l);
    if (s.is_wire()) {
      wire_end[static_cast<std::size_t>(s.wire)] = l;
    } else {
      labels[static_cast<std::size_t>(s.vertex)][static_cast<std::size_t>(s.port - 1)] = l;
    }
  };
  for (const auto& s : g.left_dangling) place(s, wire_left);
  for (const auto& s : g.right_dangling) place(s, wire_right);
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    net.nodes.push_back({&sigs.at(g.vertices[i].sig), labels[i]});
  }
  if (g.wires > 0) {
    const MixedTensor* id = net.own(equality_signature(g.q, 2, {1, 1}));
    for (int w = 0; w < g.wires; ++w) {
      net.nodes.push_back({id, {wire_left[static_cast<std::size_t>(w)], wire_right[static_cast<std::size_t>(w)]}});
    }
  }
  for (int k = 0; k < g.loops; ++k) net.scale *= static_cast<double>(g.q);
  return net;
}

Complex holant_eval(const SignatureGrid& g, const SignatureSet& sigs) {
  if (!g.closed()) throw HolantError("Holant value needs a closed grid (no dangling edges)");
  return brute_force_network(to_network(g, sigs)).front();
}

Complex holant_eval_contracted(const SignatureGrid& g, const SignatureSet& sigs, const ContractOptions& opts) {
  if (!g.closed()) throw HolantError("Holant value needs a closed grid (no dangling edges)");
  return contract_network(to_network(g, sigs), opts).front();
}

Complex holant_value(const SignatureGrid& g, const SignatureSet& sigs, EvalMethod method) {
  return method == EvalMethod::brute ? holant_eval(g, sigs) : holant_eval_contracted(g, sigs);
}

QuantumGadget QuantumGadget::of(SignatureGrid g, Complex c) {
  QuantumGadget k;
  k.terms.push_back({c, std::move(g)});
  return k;
}

Shape QuantumGadget::profile() const {
  if (terms.empty()) throw HolantError("empty quantum gadget has no profile");
  return terms.front().grid.profile();
}

int QuantumGadget::q() const {
  if (terms.empty()) throw HolantError("empty quantum gadget has no domain");
  return terms.front().grid.q;
}

void QuantumGadget::validate() const {
  const Shape p = profile();
  for (const auto& t : terms) {
    t.grid.validate();
    if (t.grid.profile() != p) throw HolantError("quantum gadget terms have different dangling profiles");
    if (t.grid.q != q()) throw HolantError("quantum gadget terms have different domains");
    if (has_closed_component(t.grid)) {
      throw HolantError("quantum gadget term has a component without dangling edges");
    }
  }
}

MixedTensor gadget_signature(const SignatureGrid& k, const SignatureSet& sigs, EvalMethod method) {
  const auto net = to_network(k, sigs);
  auto data = method == EvalMethod::brute ? brute_force_network(net) : contract_network(net);
  return MixedTensor(k.q, k.profile(), std::move(data));
}

MixedTensor gadget_signature(const QuantumGadget& k, const SignatureSet& sigs, EvalMethod method) {
  const Shape p = k.profile();
  auto acc = MixedTensor::zeros(k.q(), p);
  for (const auto& t : k.terms) {
    if (t.grid.profile() != p) throw HolantError("quantum gadget terms have different dangling profiles");
    acc = added(acc, scaled(gadget_signature(t.grid, sigs, method), t.coefficient));
  }
  return acc;
}

QuantumGadget compose(const QuantumGadget& k1, const QuantumGadget& k2,
                      const std::vector<std::pair<int, int>>& wiring) {
  QuantumGadget out;
  for (const auto& a : k1.terms) {
    for (const auto& b : k2.terms) {
      out.terms.push_back({a.coefficient * b.coefficient, compose(a.grid, b.grid, wiring)});
    }
  }
  return out;
}

}  // namespace holant
