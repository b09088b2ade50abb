#include "holant/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace holant {

void HolantPolynomial::add(Monomial m, Complex c) {
  std::sort(m.begin(), m.end());
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (c == Complex{}) return;
    if (terms_.size() >= kMaxMonomials) {
      throw HolantError("Holant polynomial exceeds " + std::to_string(kMaxMonomials) + " monomials");
    }
    terms_.emplace(std::move(m), c);
    return;
  }
  it->second += c;
  if (it->second == Complex{}) terms_.erase(it);
}

Complex HolantPolynomial::coefficient(Monomial m) const {
  std::sort(m.begin(), m.end());
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

Complex HolantPolynomial::evaluate(const SignatureSet& sigs) const {
  Complex total{};
  for (const auto& [m, c] : terms_) {
    Complex p = c;
    for (const auto& v : m) p *= sigs.at(v.sig).at(v.index);
    total += p;
  }
  return total;
}

namespace {

std::string symbol(const Variable& v, const std::map<std::string, std::string>& symbols, int q) {
  auto it = symbols.find(v.sig);
  std::string s = it == symbols.end() ? v.sig : it->second;
  if (q <= 10) {
    for (int x : v.index) s += static_cast<char>('0' + x);
    return s;
  }
  s += "[";
  for (std::size_t k = 0; k < v.index.size(); ++k) s += (k ? "," : "") + std::to_string(v.index[k]);
  return s + "]";
}

std::string coefficient_text(Complex c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

}  // namespace

std::string HolantPolynomial::to_string(const std::map<std::string, std::string>& symbols) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::vector<std::string> factors;
    if (c != Complex(1) || m.empty()) factors.push_back(coefficient_text(c));
    for (std::size_t k = 0; k < m.size();) {
      std::size_t e = k;
      while (e < m.size() && m[e] == m[k]) ++e;
      std::string f = symbol(m[k], symbols, q_);
      if (e - k > 1) f += "^" + std::to_string(e - k);
      factors.push_back(f);
      k = e;
    }
    for (std::size_t k = 0; k < factors.size(); ++k) out += (k ? "*" : "") + factors[k];
  }
  return out;
}

HolantPolynomial holant_polynomial(const SignatureGrid& g) {
  g.validate();
  if (!g.closed()) throw HolantError("Holant polynomial needs a closed grid");
  const int q = g.q;
  HolantPolynomial poly(q);
  Complex scale = 1.0;
  for (int k = 0; k < g.loops; ++k) scale *= static_cast<double>(q);

  // port_edge[v][p-1]: edge carrying port p of vertex v.
  std::vector<std::vector<std::size_t>> port_edge(g.vertices.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    port_edge[v].resize(static_cast<std::size_t>(g.vertices[v].shape.arity()));
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    port_edge[static_cast<std::size_t>(g.edges[e].contra.vertex)][static_cast<std::size_t>(g.edges[e].contra.port - 1)] = e;
    port_edge[static_cast<std::size_t>(g.edges[e].co.vertex)][static_cast<std::size_t>(g.edges[e].co.port - 1)] = e;
  }
  const std::size_t ne = g.edges.size();
  double assignments = 1;
  for (std::size_t e = 0; e < ne; ++e) assignments *= q;
  if (assignments > 1e8) throw HolantError("Holant polynomial expansion needs too many edge assignments");

  std::vector<int> sigma(ne, 0);
  while (true) {
    Monomial m;
    m.reserve(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      Variable var{g.vertices[v].sig, {}};
      for (std::size_t e : port_edge[v]) var.index.push_back(sigma[e]);
      m.push_back(std::move(var));
    }
    poly.add(std::move(m), scale);
    std::size_t k = 0;
    while (k < ne && ++sigma[k] == q) sigma[k++] = 0;
    if (k == ne) break;
  }
  return poly;
}

}  // namespace holant
