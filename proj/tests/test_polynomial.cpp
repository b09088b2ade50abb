#include "doctest.h"
#include "holant/polynomial.hpp"
#include "support.hpp"

using namespace holant;
using testing_support::random_closed_grid;
using testing_support::random_tensor;

namespace {

// X is a covariant binary signature; both its inputs come from copies of the
// contravariant unary Y.
SignatureGrid path_grid() {
  SignatureGrid g;
  g.q = 2;
  const int x = g.add_vertex("x", {0, 2});
  const int y1 = g.add_vertex("y", {1, 0});
  const int y2 = g.add_vertex("y", {1, 0});
  g.connect(y1, 1, x, 1);
  g.connect(y2, 1, x, 2);
  return g;
}

Variable var(std::string s, std::vector<int> idx) { return {std::move(s), std::move(idx)}; }

}  // namespace

TEST_CASE("x-y-y polynomial coefficients") {
  const auto p = holant_polynomial(path_grid());
  CHECK(p.size() == 4);
  CHECK(p.coefficient({var("x", {0, 0}), var("y", {0}), var("y", {0})}) == Complex(1));
  CHECK(p.coefficient({var("x", {0, 1}), var("y", {0}), var("y", {1})}) == Complex(1));
  CHECK(p.coefficient({var("x", {1, 0}), var("y", {1}), var("y", {0})}) == Complex(1));
  CHECK(p.coefficient({var("x", {1, 1}), var("y", {1}), var("y", {1})}) == Complex(1));
  CHECK(p.coefficient({var("x", {1, 1})}) == Complex(0));
  CHECK(p.to_string() == "x00*y0^2 + x01*y0*y1 + x10*y0*y1 + x11*y1^2");
}

TEST_CASE("constant polynomials") {
  const auto loop = holant_polynomial(loop_grid(2));
  CHECK(loop.size() == 1);
  CHECK(loop.coefficient({}) == Complex(2));
  CHECK(loop.to_string() == "2");
  const auto empty = holant_polynomial(loop_grid(3, 0));
  CHECK(empty.coefficient({}) == Complex(1));
}

TEST_CASE("monomial order does not matter") {
  HolantPolynomial p(2);
  p.add({var("b", {1}), var("a", {0})}, 2.0);
  p.add({var("a", {0}), var("b", {1})}, Complex(0, 1));
  CHECK(p.size() == 1);
  CHECK(p.coefficient({var("b", {1}), var("a", {0})}) == Complex(2, 1));
  p.add({var("a", {0}), var("b", {1})}, Complex(-2, -1));
  CHECK(p.size() == 0);
  CHECK(p.to_string() == "0");
}

TEST_CASE("evaluation matches the Holant value") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> qd(2, 3), nd(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rg = random_closed_grid(rng, qd(rng), nd(rng));
    const auto p = holant_polynomial(rg.grid);
    const Complex want = holant_eval(rg.grid, rg.sigs);
    CHECK(std::abs(p.evaluate(rg.sigs) - want) <= 1e-8 * (1 + std::abs(want)));
  }
  SignatureSet s;
  s.add("x", random_tensor(rng, 2, {0, 2}));
  s.add("y", random_tensor(rng, 2, {1, 0}));
  const auto g = path_grid();
  CHECK(std::abs(holant_polynomial(g).evaluate(s) - holant_eval(g, s)) < 1e-12);
}

TEST_CASE("polynomial of an open grid is rejected") {
  CHECK_THROWS_AS(holant_polynomial(wire_gadget(2)), HolantError);
}
