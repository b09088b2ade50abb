#include "holant/io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace holant::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw FormatError("at " + (where.empty() ? std::string("/") : where) + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

const Json* optional_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(where, "integer out of range");
  return static_cast<int>(v);
}

int as_nonneg(const Json& j, const std::string& where) {
  const int v = as_int(j, where);
  if (v < 0) fail(where, "expected a non-negative integer");
  return v;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) fail(where, "expected an array");
  if (size && j.size() != *size) fail(where, "expected an array of length " + std::to_string(*size));
  return j;
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

std::vector<Complex> complex_list(const Json& j, const std::string& where) {
  as_array(j, where);
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], at(where, i)));
  return out;
}

Json complex_list_to_json(std::span<const Complex> v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(complex_to_json(z));
  return a;
}

// Converts library validation errors into format errors at `where`.
template <class F>
auto checked(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const FormatError&) {
    throw;
  } catch (const HolantError& e) {
    fail(where, e.what());
  }
}

Json stub_to_json(const Stub& s) {
  return s.is_wire() ? Json::array({-1, s.wire}) : Json::array({s.vertex, s.port});
}

Stub stub_from_json(const Json& j, const std::string& where) {
  as_array(j, where, 2);
  const int a = as_int(j[0], at(where, 0));
  const int b = as_int(j[1], at(where, 1));
  return a == -1 ? Stub::of_wire(b) : Stub::at(a, b);
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries "line L, column C" for syntax errors.
    throw FormatError(std::string(source) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw HolantError(path + ": cannot write file");
  out << dump(j);
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
  as_array(j, where, 2);
  if (!j[0].is_number() || !j[1].is_number()) fail(where, "expected [re, im] numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json signature_to_json(const MixedTensor& t) {
  Json j;
  j["q"] = t.q();
  j["left"] = t.left();
  j["right"] = t.right();
  j["entries"] = complex_list_to_json(t.entries());
  return j;
}

Json signature_to_json(const SignatureDoc& d) {
  if (!d.symbool) return signature_to_json(d.tensor);
  Json j;
  j["symbool"] = complex_list_to_json(d.symbool->values);
  j["left"] = d.symbool->shape.left;
  j["right"] = d.symbool->shape.right;
  return j;
}

SignatureDoc signature_from_json(const Json& j, const std::string& where) {
  const Shape shape{as_nonneg(field(j, "left", where), at(where, "left")),
                    as_nonneg(field(j, "right", where), at(where, "right"))};
  if (const Json* sb = optional_field(j, "symbool", where)) {
    if (j.contains("entries")) fail(where, "both \"symbool\" and \"entries\" given");
    if (const Json* q = optional_field(j, "q", where); q && as_int(*q, at(where, "q")) != 2) {
      fail(at(where, "q"), "symbool signatures are Boolean (q = 2)");
    }
    SymBoolSignature s{complex_list(*sb, at(where, "symbool")), shape};
    if (static_cast<int>(s.values.size()) != shape.arity() + 1) {
      fail(at(where, "symbool"), "expected " + std::to_string(shape.arity() + 1) + " values");
    }
    SignatureDoc d;
    d.tensor = checked(where, [&] { return s.expand(); });
    d.symbool = std::move(s);
    return d;
  }
  const int q = as_int(field(j, "q", where), at(where, "q"));
  if (q < 1) fail(at(where, "q"), "domain size must be positive");
  auto entries = complex_list(field(j, "entries", where), at(where, "entries"));
  const auto expected = checked(where, [&] { return checked_power(q, shape.arity()); });
  if (entries.size() != expected) {
    fail(at(where, "entries"), "expected " + std::to_string(expected) + " entries, got " + std::to_string(entries.size()));
  }
  SignatureDoc d;
  d.tensor = checked(where, [&] { return MixedTensor(q, shape, std::move(entries)); });
  return d;
}

Json signature_set_to_json(const SignatureSet& s) { return signature_set_to_json(SignatureSetDoc{s, {}}); }

Json signature_set_to_json(const SignatureSetDoc& d) {
  Json j;
  j["q"] = d.set.q().value_or(2);
  Json list = Json::array();
  for (const auto& e : d.set) {
    Json sj;
    sj["name"] = e.name;
    const auto it = d.symbool.find(e.name);
    const Json body = it == d.symbool.end() ? signature_to_json(e.tensor) : signature_to_json(SignatureDoc{e.tensor, it->second});
    for (const auto& [k, v] : body.items()) sj[k] = v;
    list.push_back(std::move(sj));
  }
  j["signatures"] = std::move(list);
  return j;
}

SignatureSetDoc signature_set_from_json(const Json& j, const std::string& where) {
  const int q = as_int(field(j, "q", where), at(where, "q"));
  if (q < 1) fail(at(where, "q"), "domain size must be positive");
  const std::string lw = at(where, "signatures");
  const Json& list = as_array(field(j, "signatures", where), lw);
  SignatureSetDoc d{SignatureSet(q), {}};
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string w = at(lw, i);
    const auto name = as_string(field(list[i], "name", w), at(w, "name"));
    if (name.empty()) fail(at(w, "name"), "empty signature name");
    // Entries inherit the set's q when they omit it.
    Json entry = list[i];
    if (entry.is_object() && !entry.contains("q") && !entry.contains("symbool")) entry["q"] = q;
    auto sig = signature_from_json(entry, w);
    if (sig.tensor.q() != q) fail(w, "signature domain size differs from the set's q");
    if (d.set.contains(name)) fail(at(w, "name"), "duplicate signature name \"" + name + "\"");
    checked(w, [&] {
      d.set.add(name, sig.tensor);
      return 0;
    });
    if (sig.symbool) d.symbool.emplace(name, *sig.symbool);
  }
  return d;
}

Json grid_to_json(const SignatureGrid& g) {
  Json j;
  j["q"] = g.q;
  j["loops"] = g.loops;
  if (g.wires > 0) j["wires"] = g.wires;
  Json vs = Json::array();
  for (const auto& v : g.vertices) {
    Json vj;
    vj["sig"] = v.sig;
    vj["left"] = v.shape.left;
    vj["right"] = v.shape.right;
    vs.push_back(std::move(vj));
  }
  j["vertices"] = std::move(vs);
  Json es = Json::array();
  for (const auto& e : g.edges) es.push_back(Json::array({e.contra.vertex, e.contra.port, e.co.vertex, e.co.port}));
  j["edges"] = std::move(es);
  Json l = Json::array(), r = Json::array();
  for (const auto& s : g.left_dangling) l.push_back(stub_to_json(s));
  for (const auto& s : g.right_dangling) r.push_back(stub_to_json(s));
  j["left_dangling"] = std::move(l);
  j["right_dangling"] = std::move(r);
  return j;
}

SignatureGrid grid_from_json(const Json& j, const SignatureSet* sigs, const std::string& where) {
  SignatureGrid g;
  g.q = as_int(field(j, "q", where), at(where, "q"));
  if (g.q < 1) fail(at(where, "q"), "domain size must be positive");
  if (const Json* l = optional_field(j, "loops", where)) g.loops = as_nonneg(*l, at(where, "loops"));
  if (const Json* w = optional_field(j, "wires", where)) g.wires = as_nonneg(*w, at(where, "wires"));
  const std::string vw = at(where, "vertices");
  const Json& vs = as_array(field(j, "vertices", where), vw);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string w = at(vw, i);
    GridVertex v;
    v.sig = as_string(field(vs[i], "sig", w), at(w, "sig"));
    const Json* l = optional_field(vs[i], "left", w);
    const Json* r = optional_field(vs[i], "right", w);
    if (l && r) {
      v.shape = {as_nonneg(*l, at(w, "left")), as_nonneg(*r, at(w, "right"))};
    } else if (l || r) {
      fail(w, "give both \"left\" and \"right\" or neither");
    } else {
      const MixedTensor* t = sigs ? sigs->find(v.sig) : nullptr;
      if (!t) fail(at(w, "sig"), "no shape given and no signature \"" + v.sig + "\" to take it from");
      v.shape = t->shape();
    }
    g.vertices.push_back(std::move(v));
  }
  const std::string ew = at(where, "edges");
  const Json& es = as_array(field(j, "edges", where), ew);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = at(ew, i);
    as_array(es[i], w, 4);
    GridEdge e;
    e.contra = {as_int(es[i][0], at(w, 0)), as_int(es[i][1], at(w, 1))};
    e.co = {as_int(es[i][2], at(w, 2)), as_int(es[i][3], at(w, 3))};
    g.edges.push_back(e);
  }
  for (const char* side : {"left_dangling", "right_dangling"}) {
    auto& dst = side[0] == 'l' ? g.left_dangling : g.right_dangling;
    if (const Json* d = optional_field(j, side, where)) {
      const std::string dw = at(where, side);
      as_array(*d, dw);
      for (std::size_t i = 0; i < d->size(); ++i) dst.push_back(stub_from_json((*d)[i], at(dw, i)));
    }
  }
  checked(where, [&] {
    g.validate();
    if (sigs) check_bindings(g, *sigs);
    return 0;
  });
  return g;
}

Json gadget_to_json(const QuantumGadget& k) {
  Json j;
  const Shape p = k.terms.empty() ? Shape{} : k.profile();
  j["profile"] = Json::array({p.left, p.right});
  Json ts = Json::array();
  for (const auto& t : k.terms) {
    Json tj;
    tj["coefficient"] = complex_to_json(t.coefficient);
    tj["grid"] = grid_to_json(t.grid);
    ts.push_back(std::move(tj));
  }
  j["terms"] = std::move(ts);
  return j;
}

QuantumGadget gadget_from_json(const Json& j, const SignatureSet* sigs, const std::string& where) {
  const std::string pw = at(where, "profile");
  const Json& p = as_array(field(j, "profile", where), pw, 2);
  const Shape profile{as_nonneg(p[0], at(pw, 0)), as_nonneg(p[1], at(pw, 1))};
  const std::string tw = at(where, "terms");
  const Json& ts = as_array(field(j, "terms", where), tw);
  QuantumGadget k;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string w = at(tw, i);
    GadgetTerm t;
    t.coefficient = complex_from_json(field(ts[i], "coefficient", w), at(w, "coefficient"));
    t.grid = grid_from_json(field(ts[i], "grid", w), sigs, at(w, "grid"));
    if (!(t.grid.profile() == profile)) fail(at(w, "grid"), "dangling profile differs from the gadget's");
    k.terms.push_back(std::move(t));
  }
  return k;
}

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["q"] = static_cast<int>(m.rows());
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

namespace {

Matrix square_matrix(const Json& rows, int q, const std::string& where) {
  as_array(rows, where, static_cast<std::size_t>(q));
  Matrix m(q, q);
  for (int r = 0; r < q; ++r) {
    const std::string rw = at(where, static_cast<std::size_t>(r));
    as_array(rows[static_cast<std::size_t>(r)], rw, static_cast<std::size_t>(q));
    for (int c = 0; c < q; ++c) {
      m(r, c) = complex_from_json(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                  at(rw, static_cast<std::size_t>(c)));
    }
  }
  return m;
}

}  // namespace

Matrix matrix_from_json(const Json& j, const std::string& where) {
  const int q = as_int(field(j, "q", where), at(where, "q"));
  if (q < 1) fail(at(where, "q"), "dimension must be positive");
  return square_matrix(field(j, "matrix", where), q, at(where, "matrix"));
}

Json matrix_list_to_json(int q, const std::vector<Matrix>& ms) {
  Json j;
  j["q"] = q;
  Json list = Json::array();
  for (const auto& m : ms) list.push_back(matrix_to_json(m)["matrix"]);
  j["matrices"] = std::move(list);
  return j;
}

std::vector<Matrix> matrix_list_from_json(const Json& j, const std::string& where) {
  const int q = as_int(field(j, "q", where), at(where, "q"));
  if (q < 1) fail(at(where, "q"), "dimension must be positive");
  const std::string lw = at(where, "matrices");
  const Json& list = as_array(field(j, "matrices", where), lw);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(square_matrix(list[i], q, at(lw, i)));
  return out;
}

Json graph_to_json(const SimpleGraph& g) {
  Json j;
  j["n"] = g.n;
  Json es = Json::array();
  for (auto [u, v] : g.edges) es.push_back(Json::array({u, v}));
  j["edges"] = std::move(es);
  if (g.allow_loops) j["loops"] = true;
  return j;
}

SimpleGraph graph_from_json(const Json& j, const std::string& where) {
  const int n = as_nonneg(field(j, "n", where), at(where, "n"));
  bool loops = false;
  if (const Json* l = optional_field(j, "loops", where)) {
    if (!l->is_boolean()) fail(at(where, "loops"), "expected a boolean");
    loops = l->get<bool>();
  }
  const std::string ew = at(where, "edges");
  const Json& es = as_array(field(j, "edges", where), ew);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = at(ew, i);
    as_array(es[i], w, 2);
    edges.push_back({as_int(es[i][0], at(w, 0)), as_int(es[i][1], at(w, 1))});
  }
  return checked(where, [&] { return SimpleGraph(n, std::move(edges), loops); });
}

Json bijection_to_json(const Bijection& b) {
  Json j = Json::object();
  for (const auto& [k, v] : b) j[k] = v;
  return j;
}

Bijection bijection_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object mapping names to names");
  Bijection b;
  for (const auto& [k, v] : j.items()) b[k] = as_string(v, at(where, k));
  return b;
}

}  // namespace holant::io
