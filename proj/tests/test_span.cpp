#include <Eigen/Dense>

#include "doctest.h"
#include "holant/holo.hpp"
#include "holant/span.hpp"
#include "support.hpp"

using namespace holant;
using testing_support::mat2;
using testing_support::random_real_tensor;
using testing_support::random_tensor;

namespace {

SignatureSet example_set(Complex a, Complex b) {
  SignatureSet s;
  s.add("ne", disequality_signature(2, {2, 0}));
  s.add("F", SymBoolSignature{{a, b, 1, 0, 0}, {0, 4}}.expand());
  return s;
}

SignatureSet single(const std::string& name, MixedTensor t) {
  SignatureSet s;
  s.add(name, std::move(t));
  return s;
}

// Rank of the flattened tensors, computed from a plain SVD.
std::size_t rank_of(const std::vector<MixedTensor>& ts) {
  if (ts.empty()) return 0;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(ts[0].size()), static_cast<Eigen::Index>(ts.size()));
  for (std::size_t j = 0; j < ts.size(); ++j)
    for (std::size_t k = 0; k < ts[j].size(); ++k) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = ts[j][k];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) r += svd.singularValues()(k) > 1e-9 * svd.singularValues()(0);
  return r;
}

int hamming(std::size_t flat, int arity) {
  int w = 0;
  for (int k = 0; k < arity; ++k) w += (flat >> k) & 1;
  return w;
}

void check_witnesses(const GadgetSpan& span, const SignatureSet& fs) {
  for (std::size_t i = 0; i < span.dim(); ++i) {
    const auto sig = gadget_signature(span.witnesses[i], fs);
    CHECK(sig.approx_equal(span.basis[i], 1e-8));
  }
}

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int q) {
  Eigen::MatrixXcd m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = testing_support::random_complex(rng);
  return m;
}

}  // namespace

TEST_CASE("span of the empty set is the wire") {
  const SignatureSet none(3);
  for (int bound : {0, 2, 4}) {
    const auto span = build_span(none, {1, 1}, bound);
    REQUIRE(span.dim() == 1);
    CHECK(span.basis[0].approx_equal(equality_signature(3, 2, {1, 1})));
  }
  CHECK_THROWS_AS(build_span(SignatureSet{}, {1, 1}, 2), HolantError);
}

TEST_CASE("span of one matrix is its power span") {
  std::mt19937_64 rng(40);
  const std::vector<MixedTensor> cases = {
      MixedTensor::matrix(3, {1, 0, 0, 0, 2, 0, 0, 0, 3}), MixedTensor::matrix(3, {2, 1, 0, 0, 2, 0, 0, 0, 2}),
      MixedTensor::matrix(3, {0, 1, 0, 0, 0, 1, 0, 0, 0}), random_tensor(rng, 3, {1, 1}), mat2(0, 1, 0, 0)};
  for (const auto& a : cases) {
    const auto fs = single("A", a);
    std::size_t prev = 0;
    for (int bound = 0; bound <= 4; ++bound) {
      std::vector<MixedTensor> powers = {equality_signature(a.q(), 2, {1, 1})};
      for (int k = 1; k <= bound; ++k) {
        powers.push_back(from_matrix(to_matrix(powers.back()) * to_matrix(a)));
      }
      const auto span = build_span(fs, {1, 1}, bound);
      CHECK(span.dim() == rank_of(powers));
      CHECK(span.dim() >= prev);
      prev = span.dim();
      CHECK(span.gadgets_seen == static_cast<std::size_t>(bound + 1));
      check_witnesses(span, fs);
    }
  }
}

TEST_CASE("vanishing set closes to constants") {
  const auto fs = example_set(1, 1);
  SignatureSet vanishing;
  vanishing.add("ne", disequality_signature(2, {2, 0}));
  vanishing.add("F", SymBoolSignature{{1, 1, 0, 0, 0}, {0, 4}}.expand());
  const auto span = build_span(vanishing, {0, 0}, 6);
  CHECK(span.dim() == 1);
  CHECK(span.gadgets_seen > 1);
  const auto grids = enumerate_grids(2, slots_of(vanishing), 6);
  for (const auto& g : grids) {
    if (g.vertices.empty()) continue;
    CHECK(holant_eval_contracted(g, vanishing) == Complex(0));
  }
}

TEST_CASE("span monotone in the bound") {
  std::mt19937_64 rng(41);
  SignatureSet fs;
  fs.add("a", random_tensor(rng, 2, {2, 1}));
  fs.add("b", random_tensor(rng, 2, {0, 1}));
  for (Shape p : {Shape{1, 0}, Shape{1, 1}, Shape{0, 1}}) {
    std::size_t prev = 0;
    for (int bound = 0; bound <= 4; ++bound) {
      const auto span = build_span(fs, p, bound);
      CHECK(span.dim() >= prev);
      prev = span.dim();
      check_witnesses(span, fs);
    }
  }
}

TEST_CASE("Gram verdicts on matrices") {
  const auto nil = single("N", mat2(0, 1, 0, 0));
  const auto r = gram_nondegenerate(nil, {1, 1}, 4);
  REQUIRE(r.verdict == GramVerdict::vanishing_witness);
  CHECK(r.dim == 2);
  CHECK(r.rank == 1);
  REQUIRE(r.witness_signature);
  // The kernel is spanned by N itself.
  CHECK(r.witness_signature->approx_equal(mat2(0, 1, 0, 0), 1e-9));
  CHECK(gadget_signature(*r.witness, nil).approx_equal(*r.witness_signature, 1e-9));
  CHECK(r.witness_pairing < 1e-9);

  const auto id = single("I", mat2(1, 0, 0, 1));
  const auto ok = gram_nondegenerate(id, {1, 1}, 4);
  CHECK(ok.verdict == GramVerdict::nonvanishing_at_bound);
  CHECK(ok.dim == 1);
  REQUIRE(ok.singular_values.size() == 1);
  CHECK(ok.singular_values[0] == doctest::Approx(2));

  std::mt19937_64 rng(42);
  const auto full = single("A", random_tensor(rng, 3, {1, 1}));
  CHECK(gram_nondegenerate(full, {1, 1}, 3).verdict == GramVerdict::nonvanishing_at_bound);
  CHECK(to_string(GramVerdict::inconclusive) == "inconclusive");
}

TEST_CASE("Gram witness for the degree-4 example") {
  const auto fs = example_set(1, 1);
  const auto r = gram_nondegenerate(fs, {0, 4}, 6);
  REQUIRE(r.verdict == GramVerdict::vanishing_witness);
  REQUIRE(r.witness_signature);
  const auto& k = *r.witness_signature;
  bool nonzero = false;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (hamming(i, 4) >= 2) CHECK(std::abs(k[i]) < 1e-9);
    nonzero = nonzero || std::abs(k[i]) > 1e-6;
  }
  CHECK(nonzero);
  CHECK(gadget_signature(*r.witness, fs).approx_equal(k, 1e-8));
  const auto dual = build_span(fs, {4, 0}, 6);
  for (const auto& t : dual.basis) CHECK(std::abs(pair(k, t)) < 1e-8 * std::max(1.0, t.norm()));
}

TEST_CASE("bounded indistinguishability") {
  const auto f = example_set(1, 1);
  CHECK(check_indistinguishable(f, f, identity_bijection(f), 4).indistinguishable);

  const auto a = single("A", mat2(1, 0, 0, 2));
  const auto b = single("B", mat2(1, 0, 0, 3));
  const auto r = check_indistinguishable(a, b, {{"A", "B"}}, 3);
  REQUIRE(!r.indistinguishable);
  REQUIRE(r.distinguisher);
  CHECK(r.distinguisher->grid.vertices.size() == 1);
  CHECK(r.distinguisher->value_f == Complex(3));
  CHECK(r.distinguisher->value_g == Complex(4));
  CHECK(r.grids == r.distinguisher->index + 1);

  CHECK_THROWS_AS(check_indistinguishable(a, f, {{"A", "ne"}}, 2), HolantError);
  CHECK_THROWS_AS(check_indistinguishable(a, b, {{"A", "C"}}, 2), HolantError);

  std::mt19937_64 rng(43);
  SignatureSet fs;
  fs.add("x", random_tensor(rng, 2, {1, 2}));
  fs.add("y", random_tensor(rng, 2, {1, 0}));
  const HoloTransform t(random_matrix(rng, 2));
  const auto rep = check_indistinguishable(fs, act_set(t, fs), identity_bijection(fs), 5, 1e-7);
  CHECK(rep.indistinguishable);
  CHECK(rep.grids > 20);
}

TEST_CASE("covanishing") {
  const auto f = example_set(1, 1);
  CHECK(check_covanishing(f, f, identity_bijection(f), {0, 4}, 4).covanishing);

  const Complex lam(0.5, -1);
  const auto j = single("M", mat2(lam, 1, 0, lam));
  const auto d = single("M", mat2(lam, 0, 0, lam));
  const auto r = check_covanishing(j, d, identity_bijection(j), {1, 1}, 3);
  REQUIRE(!r.covanishing);
  CHECK(r.zero_side == 'g');
  CHECK(r.dim == 2);
  CHECK(r.rank_f == 2);
  CHECK(r.rank_g == 1);
  REQUIRE(r.signature_f);
  // Up to scale the F side is J - lambda I.
  const auto& sf = *r.signature_f;
  CHECK(std::abs(sf.at({0, 0})) < 1e-9);
  CHECK(std::abs(sf.at({1, 1})) < 1e-9);
  CHECK(std::abs(sf.at({1, 0})) < 1e-9);
  CHECK(std::abs(sf.at({0, 1})) > 0.1);
  CHECK(r.signature_g->norm() < 1e-9);
  CHECK(gadget_signature(*r.witness, j).approx_equal(sf, 1e-9));

  const auto g = example_set(0, 0);
  const auto e = check_covanishing(f, g, identity_bijection(f), {0, 4}, 6);
  REQUIRE(!e.covanishing);
  CHECK(e.zero_side == 'g');
  CHECK(e.signature_f->norm() > 1e-3);
  CHECK(e.signature_g->norm() < 1e-8);
  for (std::size_t i = 0; i < e.signature_f->size(); ++i) {
    if (hamming(i, 4) >= 2) CHECK(std::abs((*e.signature_f)[i]) < 1e-9);
  }
}

TEST_CASE("disequality pairs with different low weights are indistinguishable") {
  const auto f = example_set(1, 1);
  const auto g = example_set(0, 0);
  const auto r = check_indistinguishable(f, g, identity_bijection(f), 5);
  CHECK(r.indistinguishable);
  CHECK(r.max_abs_difference == 0);
  const auto h = example_set(0, 1);
  SignatureSet other;
  other.add("ne", equality_signature(2, 2, {2, 0}));
  other.add("F", SymBoolSignature{{0, 0, 1, 0, 0}, {0, 4}}.expand());
  CHECK(!check_indistinguishable(h, other, identity_bijection(h), 3).indistinguishable);
}

TEST_CASE("dual certificates") {
  SignatureSet eq;
  eq.add("e20", equality_signature(2, 2, {2, 0}));
  eq.add("e02", equality_signature(2, 2, {0, 2}));
  const auto c = dual_nonvanishing_certificate(eq, QuantumGadget::of(wire_gadget(2)));
  CHECK(c.pairing == Complex(2));
  CHECK(c.dual_signature.approx_equal(equality_signature(2, 2, {1, 1})));

  std::mt19937_64 rng(44);
  for (Shape s : {Shape{1, 2}, Shape{2, 0}, Shape{0, 3}}) {
    SignatureSet real = eq;
    const auto r = random_real_tensor(rng, 2, s);
    real.add("R", r);
    const auto k = QuantumGadget::of(vertex_gadget(2, "R", s));
    const auto cert = dual_nonvanishing_certificate(real, k);
    CHECK(cert.pairing.real() == doctest::Approx(r.norm() * r.norm()));
    CHECK(std::abs(cert.pairing.imag()) < 1e-12);
    CHECK(cert.dual_signature.approx_equal(dagger(r), 1e-12));
  }

  // Complex K with its conjugate in the set.
  SignatureSet cplx = eq;
  const auto z = random_tensor(rng, 2, {1, 1});
  cplx.add("Z", z);
  cplx.add("Zbar", conjugate(z));
  QuantumGadget k;
  k.terms.push_back({Complex(0, 1), vertex_gadget(2, "Z", {1, 1})});
  k.terms.push_back({2.0, wire_gadget(2)});
  const auto kk = gadget_signature(k, cplx);
  const auto cert = dual_nonvanishing_certificate(cplx, k);
  CHECK(cert.pairing.real() == doctest::Approx(kk.norm() * kk.norm()));

  CHECK_THROWS_AS(dual_nonvanishing_certificate(single("u", MixedTensor(2, {1, 0}, {1, Complex(0, 1)})),
                                                QuantumGadget::of(vertex_gadget(2, "u", {1, 0}))),
                  HolantError);
  SignatureSet no_eq;
  no_eq.add("R", random_real_tensor(rng, 2, {0, 1}));
  CHECK_THROWS_AS(dual_nonvanishing_certificate(no_eq, QuantumGadget::of(vertex_gadget(2, "R", {0, 1}))),
                  HolantError);
}

TEST_CASE("dual certificate through a nonsingular binary") {
  // Only a covariant =2 is present; right ends are bent through A.
  std::mt19937_64 rng(45);
  const auto a = random_real_tensor(rng, 2, {2, 0});
  const auto k = random_tensor(rng, 2, {0, 2});
  SignatureSet fs;
  fs.add("e02", equality_signature(2, 2, {0, 2}));
  fs.add("A", a);
  fs.add("K", k);
  fs.add("Kbar", conjugate(k));
  const auto cert = dual_nonvanishing_certificate(fs, QuantumGadget::of(vertex_gadget(2, "K", {0, 2})));
  // Expected: || (A^t (x) A^t) k ||^2.
  double want = 0;
  for (int c1 = 0; c1 < 2; ++c1) {
    for (int c2 = 0; c2 < 2; ++c2) {
      Complex v{};
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) v += a.at({b1, c1}) * a.at({b2, c2}) * k.at({b1, b2});
      want += std::norm(v);
    }
  }
  CHECK(cert.pairing.real() == doctest::Approx(want));
  CHECK(std::abs(cert.pairing.imag()) < 1e-9);
  CHECK(cert.dual_signature.shape() == Shape{2, 0});
}

TEST_CASE("restriction spot check") {
  // P = I_X^ with X = {0,1} inside q = 3.
  std::mt19937_64 rng(46);
  const auto p = MixedTensor::matrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 0});
  const SubdomainMask x(3, {0, 1});
  int checked = 0;
  for (int trial = 0; trial < 8; ++trial) {
    SignatureSet fs;
    fs.add("P", p);
    fs.add("A", random_tensor(rng, 3, {1, 1}));
    if (trial % 2) fs.add("B", random_tensor(rng, 3, {1, 2}));
    if (gram_nondegenerate(fs, {1, 1}, 3).verdict != GramVerdict::nonvanishing_at_bound) continue;
    SignatureSet sub;
    for (const auto& e : fs) sub.add(e.name, restrict_to(e.tensor, x));
    CHECK(gram_nondegenerate(sub, {1, 1}, 3).verdict == GramVerdict::nonvanishing_at_bound);
    ++checked;
  }
  CHECK(checked > 0);
}
