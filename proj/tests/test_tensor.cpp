#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "holant/tensor.hpp"
#include "support.hpp"

using namespace holant;
using testing_support::mat2;
using testing_support::random_tensor;

namespace {

// Index-by-index oracle for contract().
MixedTensor contract_oracle(const MixedTensor& t, int i, int j) {
  const int q = t.q();
  const Shape out{t.left() - 1, t.right() - 1};
  auto r = MixedTensor::zeros(q, out);
  std::vector<Complex> e(r.size());
  for (std::size_t f = 0; f < t.size(); ++f) {
    auto idx = t.unflatten(f);
    const int a = idx[static_cast<std::size_t>(i - 1)];
    const int b = idx[static_cast<std::size_t>(t.left() + j - 1)];
    if (a != b) continue;
    std::vector<int> rest;
    for (int k = 0; k < t.arity(); ++k) {
      if (k != i - 1 && k != t.left() + j - 1) rest.push_back(idx[static_cast<std::size_t>(k)]);
    }
    e[r.flat_index(rest)] += t[f];
  }
  return MixedTensor(q, out, e);
}

}  // namespace

TEST_CASE("equality signatures") {
  auto id = equality_signature(2, 2, {1, 1});
  CHECK(id.approx_equal(mat2(1, 0, 0, 1)));
  auto ones = equality_signature(3, 1, {1, 0});
  for (std::size_t k = 0; k < 3; ++k) CHECK(ones[k] == Complex(1));
  auto eq3 = equality_signature(2, 3, {3, 0});
  for (std::size_t k = 0; k < 8; ++k) CHECK(eq3[k] == Complex((k == 0 || k == 7) ? 1.0 : 0.0));
  CHECK_THROWS_AS(equality_signature(2, 0, {0, 0}), HolantError);
  CHECK_THROWS_AS(equality_signature(2, 2, {1, 0}), HolantError);
}

TEST_CASE("tensor product") {
  CHECK(tensor_product(MixedTensor::scalar(2, 2), MixedTensor::scalar(3, 2)).as_scalar() == Complex(6));
  auto id = equality_signature(2, 2, {1, 1});
  auto sq = tensor_product(id, id);
  CHECK(sq.shape() == Shape{2, 2});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) CHECK(sq.at({a, b, c, d}) == Complex((a == c && b == d) ? 1.0 : 0.0));
  auto e0 = MixedTensor(2, {1, 0}, {1, 0});
  auto e1 = MixedTensor(2, {1, 0}, {0, 1});
  auto p = tensor_product(e0, e1);
  CHECK(p.shape() == Shape{2, 0});
  CHECK(p.at({0, 1}) == Complex(1));
  CHECK(p.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(tensor_product(e0, MixedTensor(3, {1, 0}, {1, 0, 0})), HolantError);
}

TEST_CASE("contraction") {
  CHECK(contract(equality_signature(5, 2, {1, 1}), 1, 1).as_scalar() == Complex(5));
  CHECK(contract(mat2(1, 2, 3, 4), 1, 1).as_scalar() == Complex(5));
  std::mt19937_64 rng(11);
  auto a = random_tensor(rng, 3, {1, 1});
  auto ai = tensor_product(a, equality_signature(3, 2, {1, 1}));
  CHECK(contract(ai, 2, 2).approx_equal(scaled(a, 3.0), 1e-12));
  CHECK_THROWS_AS(contract(a, 2, 1), HolantError);
  CHECK_THROWS_AS(contract(a, 1, 0), HolantError);

  for (int q = 1; q <= 3; ++q) {
    for (Shape s : {Shape{1, 1}, Shape{2, 1}, Shape{1, 3}, Shape{2, 2}, Shape{3, 1}}) {
      auto t = random_tensor(rng, q, s);
      for (int i = 1; i <= s.left; ++i)
        for (int j = 1; j <= s.right; ++j) CHECK(contract(t, i, j).approx_equal(contract_oracle(t, i, j), 1e-12));
    }
  }
}

TEST_CASE("contraction order coherence") {
  std::mt19937_64 rng(12);
  for (int q = 1; q <= 3; ++q) {
    auto t = random_tensor(rng, q, {2, 2});
    auto x = contract(contract(t, 1, 1), 1, 1);
    auto y = contract(contract(t, 2, 2), 1, 1);
    CHECK(std::abs(x.as_scalar() - y.as_scalar()) < 1e-10);
    auto u = contract(contract(t, 1, 2), 1, 1);
    auto v = contract(contract(t, 2, 1), 1, 1);
    CHECK(std::abs(u.as_scalar() - v.as_scalar()) < 1e-10);
  }
}

TEST_CASE("pairing") {
  CHECK(pair(equality_signature(4, 2, {1, 1}), equality_signature(4, 2, {1, 1})) == Complex(4));
  auto e01 = mat2(0, 1, 0, 0);
  auto e10 = mat2(0, 0, 1, 0);
  CHECK(pair(e01, e10) == Complex(1));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    auto f = random_tensor(rng, 3, {1, 1});
    auto g = random_tensor(rng, 3, {1, 1});
    CHECK(std::abs(pair(f, g) - pair(g, f)) < 1e-10);
  }
  CHECK_THROWS_AS(pair(random_tensor(rng, 2, {2, 0}), random_tensor(rng, 2, {2, 0})), HolantError);
}

TEST_CASE("restriction and padding") {
  auto r = restrict_to(equality_signature(4, 2, {1, 1}), SubdomainMask(4, {0, 1}));
  CHECK(r.approx_equal(equality_signature(2, 2, {1, 1})));
  auto eq3 = restrict_to(equality_signature(3, 3, {2, 1}), SubdomainMask(3, {0, 2}));
  CHECK(eq3.approx_equal(equality_signature(2, 3, {2, 1})));
  CHECK_THROWS_AS(restrict_to(eq3, SubdomainMask(2, {})), HolantError);

  auto pad = embed_uparrow(equality_signature(2, 2, {1, 1}), 3);
  CHECK(pad.approx_equal(MixedTensor::matrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 0})));
  CHECK(embed_uparrow(MixedTensor::scalar(7, 2), 5).as_scalar() == Complex(7));
  CHECK_THROWS_AS(embed_uparrow(pad, 4, std::vector<int>{0, 0, 1}), HolantError);

  std::mt19937_64 rng(5);
  for (Shape s : {Shape{1, 0}, Shape{1, 1}, Shape{2, 1}, Shape{0, 3}}) {
    auto t = random_tensor(rng, 2, s);
    auto e = embed_uparrow(t, 4, std::vector<int>{1, 3});
    CHECK(restrict_to(e, SubdomainMask(4, {1, 3})).approx_equal(t));
    CHECK(e.norm() == doctest::Approx(t.norm()));
    auto p = embed_uparrow(t, 4);
    CHECK(restrict_to(p, SubdomainMask::prefix(4, 2)).approx_equal(t));
    // Padding after restricting is idempotent on tensors supported on X.
    auto once = embed_uparrow(restrict_to(p, SubdomainMask::prefix(4, 2)), 4);
    auto twice = embed_uparrow(restrict_to(once, SubdomainMask::prefix(4, 2)), 4);
    CHECK(once.approx_equal(p));
    CHECK(twice.approx_equal(once));
  }
}

TEST_CASE("direct sum") {
  CHECK(direct_sum(equality_signature(2, 2, {1, 1}), equality_signature(3, 2, {1, 1}))
            .approx_equal(equality_signature(5, 2, {1, 1})));
  auto u = direct_sum(MixedTensor(2, {1, 0}, {1, 0}), MixedTensor(1, {1, 0}, {2}));
  CHECK(u.approx_equal(MixedTensor(3, {1, 0}, {1, 0, 2})));
  std::mt19937_64 rng(8);
  auto f = random_tensor(rng, 2, {1, 2});
  auto g = random_tensor(rng, 3, {1, 2});
  auto fg = direct_sum(f, g);
  CHECK(restrict_to(fg, SubdomainMask::prefix(5, 2)).approx_equal(f));
  CHECK(restrict_to(fg, SubdomainMask(5, {2, 3, 4})).approx_equal(g));
  CHECK(fg.at({0, 2, 1}) == Complex(0));
  CHECK_THROWS_AS(direct_sum(f, random_tensor(rng, 2, {2, 1})), HolantError);
}

TEST_CASE("dagger") {
  auto id = equality_signature(3, 2, {1, 1});
  CHECK(dagger(id).approx_equal(id));
  std::mt19937_64 rng(9);
  for (Shape s : {Shape{0, 0}, Shape{1, 0}, Shape{2, 1}, Shape{1, 2}, Shape{0, 3}}) {
    auto t = random_tensor(rng, 2, s);
    auto d = dagger(t);
    CHECK(d.shape() == s.transposed());
    double sq = 0;
    for (auto x : t.entries()) sq += std::norm(x);
    const Complex p = pair(t, d);
    CHECK(std::abs(p.imag()) < 1e-10);
    CHECK(p.real() == doctest::Approx(sq));
    CHECK(dagger(d).approx_equal(t, 0.0));
  }
  // Norm multiplicativity under tensor products.
  auto a = random_tensor(rng, 2, {1, 1});
  auto b = random_tensor(rng, 2, {0, 2});
  auto ab = tensor_product(a, b);
  CHECK(std::abs(pair(ab, dagger(ab)) - pair(a, dagger(a)) * pair(b, dagger(b))) < 1e-9);
}

TEST_CASE("symmetric Boolean signatures") {
  SymBoolSignature f{{Complex(1), Complex(2), Complex(3), Complex(4), Complex(5), Complex(6)}, {2, 3}};
  auto t = f.expand();
  CHECK(t.shape() == Shape{2, 3});
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto idx = t.unflatten(k);
    CHECK(t[k] == Complex(1.0 + std::count(idx.begin(), idx.end(), 1)));
  }
  for (int n = 1; n <= 5; ++n) {
    std::vector<Complex> vals;
    for (int w = 0; w <= n; ++w) vals.push_back(Complex(w * w + 1.0, w));
    auto s = SymBoolSignature{vals, {n, 0}}.expand();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      CHECK(permute_slots(s, perm, {n, 0}).approx_equal(s, 0.0));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  CHECK_THROWS_AS((SymBoolSignature{{1, 2}, {1, 1}}.expand()), HolantError);
}

TEST_CASE("entry guard") {
  CHECK_THROWS_AS(MixedTensor::zeros(2, {27, 0}), HolantError);
  CHECK_THROWS_AS(MixedTensor(2, {1, 0}, {1}), HolantError);
}
