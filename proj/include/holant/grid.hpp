#pragma once

// Signature grids, gadgets, quantum gadgets and their Holant values.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holant/contract.hpp"
#include "holant/tensor.hpp"

namespace holant {

/// Named signatures over one domain, kept in insertion order.
class SignatureSet {
 public:
  struct Entry {
    std::string name;
    MixedTensor tensor;
  };

  SignatureSet() = default;
  /// An empty set that still knows its domain size.
  explicit SignatureSet(int q) : q_(q) {}
  explicit SignatureSet(std::vector<Entry> entries);

  void add(std::string name, MixedTensor tensor);
  const MixedTensor* find(std::string_view name) const;
  const MixedTensor& at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Domain size of the members; nullopt for an empty set built without one.
  std::optional<int> q() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::optional<int> q_;
  std::vector<Entry> entries_;
};

/// A vertex port: `port` is 1-based, 1..left are the contravariant (left)
/// ports and left+1..left+right the covariant (right) ports.
struct PortRef {
  int vertex = 0;
  int port = 1;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct GridVertex {
  std::string sig;
  Shape shape;
};

/// An edge always joins a contravariant port to a covariant port.
struct GridEdge {
  PortRef contra;
  PortRef co;
};

/// A dangling end: either a vertex port or one end of a wire (a two-sided
/// dangling edge with no vertex).
struct Stub {
  int vertex = -1;
  int port = 0;
  int wire = -1;

  static Stub at(int vertex, int port) { return {vertex, port, -1}; }
  static Stub of_wire(int w) { return {-1, 0, w}; }
  bool is_wire() const { return wire >= 0; }
  PortRef ref() const { return {vertex, port}; }
  friend bool operator==(const Stub&, const Stub&) = default;
};

/// Bi-Holant signature grid with optional dangling edges. Left-dangling stubs
/// sit on contravariant ports, right-dangling on covariant ports; each wire
/// appears once in each list.
struct SignatureGrid {
  int q = 2;
  int loops = 0;
  int wires = 0;
  std::vector<GridVertex> vertices;
  std::vector<GridEdge> edges;
  std::vector<Stub> left_dangling;
  std::vector<Stub> right_dangling;

  Shape profile() const {
    return {static_cast<int>(left_dangling.size()), static_cast<int>(right_dangling.size())};
  }
  bool closed() const { return left_dangling.empty() && right_dangling.empty(); }

  int add_vertex(std::string sig, Shape shape);
  /// Joins the i-th contravariant port of `contra_vertex` with the j-th
  /// covariant port of `co_vertex` (both 1-based within their side).
  void connect(int contra_vertex, int i, int co_vertex, int j);

  /// Throws unless every port is used exactly once with correct typing.
  void validate() const;
};

bool is_contra_port(const GridVertex& v, int port);

/// Component id per vertex plus one component per wire; `closed` reports
/// components without any dangling end.
struct ComponentInfo {
  std::vector<int> vertex_component;
  int count = 0;
  std::vector<bool> has_dangling;
};
ComponentInfo components(const SignatureGrid& g);
bool has_closed_component(const SignatureGrid& g);

SignatureGrid wire_gadget(int q);
/// One vertex carrying `sig` with every port dangling in slot order.
SignatureGrid vertex_gadget(int q, std::string sig, Shape shape);
SignatureGrid loop_grid(int q, int loops = 1);

SignatureGrid disjoint_union(const SignatureGrid& a, const SignatureGrid& b);
/// Connects right-dangling end `right_index` of k1 with left-dangling end
/// `left_index` of k2 (1-based). Remaining ends keep their order: k1's, then k2's.
SignatureGrid compose(const SignatureGrid& k1, const SignatureGrid& k2,
                      const std::vector<std::pair<int, int>>& wiring);
/// Joins left-dangling end i with right-dangling end j of one gadget.
SignatureGrid contract_dangling(const SignatureGrid& k, int i, int j);
/// Places a new (1,1) vertex carrying `sig` in the middle of edge `edge`.
SignatureGrid subdivide_edge(const SignatureGrid& g, std::size_t edge, std::string sig);
/// Replaces vertex v by gadget k whose profile equals v's shape; k's left
/// (right) dangling ends take over v's contravariant (covariant) ports.
SignatureGrid substitute_vertex(const SignatureGrid& g, int v, const SignatureGrid& k);
/// Renames signatures according to `mapping` (names missing from it stay).
SignatureGrid rename_signatures(const SignatureGrid& g, const std::map<std::string, std::string>& mapping);

/// Checks vertex shapes against the bound signatures.
void check_bindings(const SignatureGrid& g, const SignatureSet& sigs);

/// Tensor network of a grid: internal edges are summed, dangling ends are the
/// output slots in (left dangling..., right dangling...) order.
TensorNetwork to_network(const SignatureGrid& g, const SignatureSet& sigs);

enum class EvalMethod { brute, contract };

Complex holant_eval(const SignatureGrid& g, const SignatureSet& sigs);
Complex holant_eval_contracted(const SignatureGrid& g, const SignatureSet& sigs,
                               const ContractOptions& opts = {});
Complex holant_value(const SignatureGrid& g, const SignatureSet& sigs, EvalMethod method);

struct GadgetTerm {
  Complex coefficient{1.0, 0.0};
  SignatureGrid grid;
};

/// Formal linear combination of gadgets sharing one dangling profile.
struct QuantumGadget {
  std::vector<GadgetTerm> terms;

  static QuantumGadget of(SignatureGrid g, Complex c = 1.0);
  Shape profile() const;
  int q() const;
  /// Throws on mixed profiles or a term with a component lacking dangling ends.
  void validate() const;
};

MixedTensor gadget_signature(const SignatureGrid& k, const SignatureSet& sigs,
                             EvalMethod method = EvalMethod::contract);
MixedTensor gadget_signature(const QuantumGadget& k, const SignatureSet& sigs,
                             EvalMethod method = EvalMethod::contract);

QuantumGadget compose(const QuantumGadget& k1, const QuantumGadget& k2,
                      const std::vector<std::pair<int, int>>& wiring);

}  // namespace holant
