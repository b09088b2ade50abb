#include <Eigen/QR>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "holant/enumerate.hpp"
#include "holant/holo.hpp"
#include "support.hpp"

using namespace holant;
using testing_support::random_complex;
using testing_support::random_tensor;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int q) {
  Matrix m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = random_complex(rng);
  return m;
}

// Random invertible matrix with condition number at most ~50.
Matrix well_conditioned(std::mt19937_64& rng, int q) {
  while (true) {
    Matrix m = random_matrix(rng, q);
    Eigen::JacobiSVD<Matrix> svd(m);
    if (svd.singularValues()(0) / svd.singularValues()(q - 1) < 50) return m;
  }
}

Matrix rotation(double th) {
  Matrix r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

Matrix householder(std::mt19937_64& rng, int q) {
  std::normal_distribution<double> n(0, 1);
  Eigen::VectorXcd v(q);
  for (int i = 0; i < q; ++i) v(i) = n(rng);
  v.normalize();
  return Matrix::Identity(q, q) - 2.0 * v * v.transpose();
}

double gap(const MixedTensor& a, const MixedTensor& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

SignatureSet random_set(std::mt19937_64& rng, int q) {
  std::uniform_int_distribution<int> count(1, 3), arity(1, 3);
  SignatureSet s;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    const int a = arity(rng);
    std::uniform_int_distribution<int> split(0, a);
    const int l = split(rng);
    s.add("f" + std::to_string(k), random_tensor(rng, q, {l, a - l}));
  }
  return s;
}

}  // namespace

TEST_CASE("transform construction") {
  CHECK_THROWS_AS(HoloTransform(Matrix::Zero(2, 2)), HolantError);
  CHECK_THROWS_AS(HoloTransform(Matrix(2, 3)), HolantError);
  Matrix near(2, 2);
  near << 1, 0, 0, 1e-13;
  CHECK_THROWS_AS(HoloTransform{near}, HolantError);
  near(1, 1) = 1e-9;
  HoloTransform warned(near);
  CHECK(warned.warnings().size() == 1);
  CHECK(warned.condition() == doctest::Approx(1e9));
  std::mt19937_64 rng(5);
  const HoloTransform t(well_conditioned(rng, 4));
  CHECK((t.matrix() * t.inverse() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(t.warnings().empty());
}

TEST_CASE("action basics") {
  std::mt19937_64 rng(6);
  const auto f = random_tensor(rng, 3, {2, 1});
  const auto same = act(HoloTransform::identity(3), f);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(same[k] == f[k]);

  const HoloTransform s(well_conditioned(rng, 3)), t(well_conditioned(rng, 3));
  CHECK(gap(act(t, act(s, f)), act(t * s, f)) < 1e-10);

  const auto eq2 = equality_signature(3, 2, {2, 0});
  const Matrix ttt = t.matrix() * t.matrix().transpose();
  const auto moved = act(t, eq2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(moved.at({i, j}) - ttt(i, j)) < 1e-10);

  // On a matrix the action is conjugation T A T^-1.
  const auto a = random_tensor(rng, 3, {1, 1});
  const Matrix conj = t.matrix() * to_matrix(a) * t.inverse();
  CHECK((to_matrix(act(t, a)) - conj).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(act(t, random_tensor(rng, 2, {1, 0})), HolantError);
  const auto set = act_set(t, SignatureSet({{"a", a}, {"e", eq2}}));
  CHECK(set[0].name == "a");
  CHECK(gap(set.at("e"), moved) == 0);
}

TEST_CASE("3x3 Jordan block scaled by diag(eps^2, eps, 1)") {
  const double eps = 1e-2;
  const Complex lam(0.5, 2);
  const auto j = MixedTensor::matrix(3, {lam, 1, 0, 0, lam, 1, 0, 0, lam});
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = eps * eps;
  d(1, 1) = eps;
  d(2, 2) = 1;
  const auto r = act(HoloTransform(d), j);
  CHECK(std::abs(r.at({0, 1}) - eps) < 1e-14);
  CHECK(std::abs(r.at({1, 2}) - eps) < 1e-14);
  CHECK(std::abs(r.at({0, 2})) == 0);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r.at({i, i}) - lam) < 1e-14);

  const auto fam = epsilon_family_jordan(j, eps);
  CHECK(std::abs(fam.result.at({0, 1}) - eps) < 1e-14);
  CHECK(fam.distance == doctest::Approx(std::sqrt(2.0) * eps));
  CHECK(!fam.warnings.empty());  // repeated eigenvalue
}

TEST_CASE("Jordan family convergence") {
  // Diagonal input: nothing to remove.
  const auto diag = MixedTensor::matrix(2, {3, 0, 0, -1});
  CHECK(epsilon_family_jordan(diag, 0.3).distance == 0);

  const auto nil = MixedTensor::matrix(2, {0, 1, 0, 0});
  const auto r = epsilon_family_jordan(nil, 1e-3);
  CHECK(r.result.norm() == doctest::Approx(1e-3));
  CHECK(r.limit.norm() == 0);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_tensor(rng, 3, {1, 1});
    double prev = INFINITY;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const auto fam = epsilon_family_jordan(f, eps);
      // The result is similar to f and its eigenvalues are the limit diagonal.
      CHECK(std::abs(to_matrix(fam.result).trace() - to_matrix(f).trace()) < 1e-9);
      CHECK(fam.distance < prev);
      CHECK(fam.distance <= eps * 10 * (1 + f.norm()));
      prev = fam.distance;
    }
  }
  CHECK_THROWS_AS(epsilon_family_jordan(nil, 0), HolantError);
  CHECK_THROWS_AS(epsilon_family_jordan(equality_signature(2, 2, {2, 0}), 0.1), HolantError);
}

TEST_CASE("counterexample family") {
  const auto r = epsilon_family_counterexample(1, 1, 1e-1);
  REQUIRE(r.fvector.size() == 5);
  CHECK(std::abs(r.fvector[0] - 1e-4) < 1e-15);
  CHECK(std::abs(r.fvector[1] - 1e-2) < 1e-15);
  CHECK(std::abs(r.fvector[2] - 1.0) < 1e-15);
  CHECK(r.fvector[3] == Complex(0));
  CHECK(r.fvector[4] == Complex(0));
  CHECK(r.disequality_fixed);
  CHECK(r.distance == doctest::Approx(r.predicted_distance).epsilon(1e-12));

  for (double eps : {0.5, 1e-1, 1e-3}) CHECK(epsilon_family_counterexample(0, 0, eps).distance < 1e-14);

  for (double eps : {1e-1, 5e-2, 1e-2, 1e-3}) {
    const double d1 = epsilon_family_counterexample(0, 1, eps).distance;
    const double d2 = epsilon_family_counterexample(0, 1, eps / 2).distance;
    CHECK(d1 / d2 >= 4 - 1e-9);
  }
  const Complex a(0.3, -1), b(2, 0.5);
  for (double eps : {0.7, 0.2, 1e-2}) {
    const auto c = epsilon_family_counterexample(a, b, eps);
    CHECK(c.distance == doctest::Approx(c.predicted_distance).epsilon(1e-10));
  }
}

TEST_CASE("counterexample Holant values do not depend on eps") {
  const Complex a(0.3, -1), b(2, 0.5);
  const auto base = epsilon_family_counterexample(a, b, 1);
  const auto grids = enumerate_grids(2, slots_of(base.transformed), 6);
  REQUIRE(grids.size() > 10);
  for (double eps : {0.5, 1e-1, 1e-2}) {
    const auto r = epsilon_family_counterexample(a, b, eps);
    for (const auto& g : grids) {
      const Complex h0 = holant_eval_contracted(g, base.transformed);
      CHECK(std::abs(holant_eval_contracted(g, r.transformed) - h0) <= 1e-8 * (1 + std::abs(h0)));
    }
  }
}

TEST_CASE("Holant theorem on enumerated grids") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    const int q = 2 + trial % 2;
    const auto fs = random_set(rng, q);
    const auto rep = verify_holant_theorem(fs, HoloTransform(well_conditioned(rng, q)), 4);
    CHECK(rep.passed);
    CHECK(rep.max_scaled_discrepancy < 1e-8);
    const auto id = verify_holant_theorem(fs, HoloTransform::identity(q), 4);
    CHECK(id.max_abs_discrepancy == 0);
  }
  SignatureSet eqs;
  eqs.add("e", equality_signature(2, 2, {2, 0}));
  eqs.add("d", equality_signature(2, 2, {0, 2}));
  const HoloTransform rot(rotation(0.7));
  const auto moved = act_set(rot, eqs);
  CHECK(gap(moved.at("e"), eqs.at("e")) < 1e-12);
  CHECK(gap(moved.at("d"), eqs.at("d")) < 1e-12);
  CHECK(verify_holant_theorem(eqs, rot, 6).max_abs_discrepancy < 1e-12);
  CHECK_THROWS_AS(verify_holant_theorem(eqs, HoloTransform::identity(3), 2), HolantError);
}

TEST_CASE("gadget signatures are equivariant") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const int q = 2 + trial % 2;
    SignatureSet fs;
    fs.add("a", random_tensor(rng, q, {2, 1}));
    fs.add("b", random_tensor(rng, q, {0, 1}));
    const HoloTransform t(well_conditioned(rng, q));
    const auto tfs = act_set(t, fs);
    const Shape profile = trial < 3 ? Shape{1, 0} : Shape{1, 2};
    const auto gadgets = enumerate_gadgets(q, slots_of(fs), profile, 3);
    REQUIRE(!gadgets.empty());
    for (const auto& k : gadgets) {
      const auto lhs = gadget_signature(k, tfs);
      const auto rhs = act(t, gadget_signature(k, fs));
      CHECK(gap(lhs, rhs) <= 1e-9 * (1 + rhs.max_abs()));
    }
  }
}

TEST_CASE("pairing is invariant") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int q = 2 + trial % 3;
    const Shape s{trial % 3, (trial / 3) % 3};
    const auto k = random_tensor(rng, q, s), k2 = random_tensor(rng, q, s.transposed());
    const HoloTransform t(well_conditioned(rng, q));
    const Complex p = pair(k, k2);
    CHECK(std::abs(pair(act(t, k), act(t, k2)) - p) <= 1e-9 * (1 + std::abs(p)) * std::pow(50.0, s.arity()));
  }
}

TEST_CASE("orthogonality predicate") {
  std::mt19937_64 rng(15);
  CHECK(is_orthogonal_preserver(HoloTransform(rotation(0.3))));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 0.5;
  CHECK(!is_orthogonal_preserver(HoloTransform(d)));
  for (int q = 1; q <= 5; ++q) CHECK(is_orthogonal_preserver(HoloTransform(householder(rng, q))));
  CHECK(!is_orthogonal_preserver(HoloTransform(well_conditioned(rng, 3))));
  // Complex orthogonal but not unitary.
  Matrix c(2, 2);
  const Complex ch = std::cosh(Complex(0, 0.4) + 0.8), sh = std::sinh(Complex(0, 0.4) + 0.8);
  const Complex i(0, 1);
  c << ch, i * sh, -i * sh, ch;
  CHECK(is_orthogonal_preserver(HoloTransform(c)));
}

TEST_CASE("permutation predicate") {
  Matrix shift = Matrix::Zero(3, 3);
  shift(0, 1) = shift(1, 2) = shift(2, 0) = 1;
  CHECK(is_permutation_preserver(HoloTransform(shift)));
  CHECK(is_permutation_preserver(HoloTransform::identity(4)));
  const HoloTransform r45(rotation(M_PI / 4));
  CHECK(is_orthogonal_preserver(r45));
  CHECK(!is_permutation_preserver(r45));
  // =3 is moved: the 111 entry of T.(=3) is sin^3 + cos^3.
  const auto e3 = act(r45, equality_signature(2, 3, {3, 0}));
  CHECK(std::abs(e3.at({1, 1, 1}) - 2 * std::pow(std::sqrt(0.5), 3)) < 1e-12);

  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const int q = 1 + trial % 5;
    std::vector<int> p(static_cast<std::size_t>(q));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    Matrix m = Matrix::Zero(q, q);
    for (int k = 0; k < q; ++k) m(k, p[static_cast<std::size_t>(k)]) = 1;
    const HoloTransform t(m);
    CHECK(is_permutation_preserver(t));
    CHECK(is_orthogonal_preserver(t));
    const HoloTransform h(householder(rng, q));
    if (is_permutation_preserver(h)) CHECK(is_orthogonal_preserver(h));
  }
  // Signed permutations are orthogonal but not permutations.
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1;
  CHECK(is_orthogonal_preserver(HoloTransform(neg)));
  CHECK(!is_permutation_preserver(HoloTransform(neg)));
}
