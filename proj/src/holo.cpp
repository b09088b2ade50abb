#include "holant/holo.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "holant/enumerate.hpp"
#include "holant/parallel.hpp"

namespace holant {

Matrix to_matrix(const MixedTensor& t) {
  if (t.shape() != Shape{1, 1}) throw HolantError("expected a (1,1) signature, got " + to_string(t.shape()));
  const int q = t.q();
  Matrix m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = t[static_cast<std::size_t>(i * q + j)];
  return m;
}

MixedTensor from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw HolantError("expected a square matrix");
  const auto q = static_cast<int>(m.rows());
  std::vector<Complex> e(static_cast<std::size_t>(q * q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) e[static_cast<std::size_t>(i * q + j)] = m(i, j);
  return MixedTensor::matrix(q, std::move(e));
}

HoloTransform::HoloTransform(Matrix m, const TransformOptions& opts) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) throw HolantError("transform must be a square matrix");
  for (Eigen::Index i = 0; i < matrix_.size(); ++i) {
    if (!std::isfinite(matrix_.data()[i].real()) || !std::isfinite(matrix_.data()[i].imag())) {
      throw HolantError("transform has non-finite entries");
    }
  }
  Eigen::JacobiSVD<Matrix> svd(matrix_);
  const auto& sv = svd.singularValues();
  const double smax = sv(0), smin = sv(sv.size() - 1);
  if (smin == 0.0) throw HolantError("transform is singular");
  condition_ = smax / smin;
  if (condition_ > opts.max_condition) {
    throw HolantError("transform is ill-conditioned (condition number " + std::to_string(condition_) + ")");
  }
  if (condition_ > opts.warn_condition) {
    warnings_.push_back("transform condition number " + std::to_string(condition_) + " exceeds " +
                        std::to_string(opts.warn_condition));
  }
  inverse_ = Eigen::PartialPivLU<Matrix>(matrix_).inverse();
  const double resid = (matrix_ * inverse_ - Matrix::Identity(q(), q())).cwiseAbs().maxCoeff();
  if (resid > 1e-9) {
    warnings_.push_back("T * T^-1 deviates from I by " + std::to_string(resid));
  }
}

HoloTransform HoloTransform::identity(int q) { return HoloTransform(Matrix::Identity(q, q)); }

HoloTransform operator*(const HoloTransform& a, const HoloTransform& b) {
  if (a.q() != b.q()) throw HolantError("transform sizes differ");
  TransformOptions loose;
  loose.max_condition = std::numeric_limits<double>::infinity();
  return HoloTransform(a.matrix() * b.matrix(), loose);
}

namespace {

// data[..., a, ...] <- sum_b m(a, b) data[..., b, ...] at slot k.
void apply_slot(std::vector<Complex>& data, int q, int arity, int k, const Matrix& m) {
  std::size_t stride = 1;
  for (int s = k + 1; s < arity; ++s) stride *= static_cast<std::size_t>(q);
  const std::size_t block = stride * static_cast<std::size_t>(q);
  std::vector<Complex> x(static_cast<std::size_t>(q));
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (std::size_t s = 0; s < stride; ++s) {
      for (int b = 0; b < q; ++b) x[static_cast<std::size_t>(b)] = data[base + static_cast<std::size_t>(b) * stride + s];
      for (int a = 0; a < q; ++a) {
        Complex acc{};
        for (int b = 0; b < q; ++b) acc += m(a, b) * x[static_cast<std::size_t>(b)];
        data[base + static_cast<std::size_t>(a) * stride + s] = acc;
      }
    }
  }
}

}  // namespace

MixedTensor act(const HoloTransform& t, const MixedTensor& f) {
  if (t.q() != f.q()) throw HolantError("transform size does not match the signature domain");
  if (t.matrix() == Matrix::Identity(t.q(), t.q())) return f;
  std::vector<Complex> data(f.entries().begin(), f.entries().end());
  const Matrix inv_t = t.inverse().transpose();
  for (int k = 0; k < f.arity(); ++k) apply_slot(data, f.q(), f.arity(), k, k < f.left() ? t.matrix() : inv_t);
  return MixedTensor(f.q(), f.shape(), std::move(data));
}

SignatureSet act_set(const HoloTransform& t, const SignatureSet& fs) {
  SignatureSet out;
  for (const auto& e : fs) out.add(e.name, act(t, e.tensor));
  return out;
}

TheoremReport verify_holant_theorem(const SignatureSet& fs, const HoloTransform& t, int max_vertices, double tol) {
  const int q = fs.q().value_or(t.q());
  if (q != t.q()) throw HolantError("transform size does not match the signature domain");
  const SignatureSet tfs = act_set(t, fs);
  const auto grids = enumerate_grids(q, slots_of(fs), max_vertices);
  std::vector<Complex> hf(grids.size()), ht(grids.size());
  parallel_for(grids.size(), [&](std::size_t i) {
    hf[i] = holant_eval_contracted(grids[i], fs);
    ht[i] = holant_eval_contracted(grids[i], tfs);
  });
  TheoremReport r;
  r.grids = grids.size();
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const double d = std::abs(hf[i] - ht[i]);
    const double scaled_d = d / (1.0 + std::abs(hf[i]));
    r.max_abs_discrepancy = std::max(r.max_abs_discrepancy, d);
    if (scaled_d > r.max_scaled_discrepancy) {
      r.max_scaled_discrepancy = scaled_d;
      r.worst_grid = i;
    }
  }
  r.passed = r.max_scaled_discrepancy <= tol;
  return r;
}

namespace {

double max_entry_gap(const MixedTensor& a, const MixedTensor& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

bool is_orthogonal_preserver(const HoloTransform& t) {
  const int q = t.q();
  const auto eq2 = equality_signature(q, 2, {2, 0});
  const bool by_action = max_entry_gap(act(t, eq2), eq2) <= kPredicateTol;
  const Matrix ttt = t.matrix() * t.matrix().transpose();
  const bool by_matrix = (ttt - Matrix::Identity(q, q)).cwiseAbs().maxCoeff() <= kPredicateTol;
  if (by_action != by_matrix) throw HolantError("orthogonality test disagrees with T T^t = I");
  return by_action;
}

bool is_permutation_preserver(const HoloTransform& t) {
  const int q = t.q();
  const auto eq2 = equality_signature(q, 2, {2, 0});
  const auto eq3 = equality_signature(q, 3, {3, 0});
  const bool by_action =
      max_entry_gap(act(t, eq2), eq2) <= kPredicateTol && max_entry_gap(act(t, eq3), eq3) <= kPredicateTol;
  bool by_pattern = true;
  const Matrix& m = t.matrix();
  for (int i = 0; i < q && by_pattern; ++i) {
    int row_ones = 0, col_ones = 0;
    for (int j = 0; j < q; ++j) {
      const bool one = std::abs(m(i, j) - 1.0) <= kPredicateTol;
      const bool zero = std::abs(m(i, j)) <= kPredicateTol;
      if (!one && !zero) by_pattern = false;
      row_ones += one;
      col_ones += std::abs(m(j, i) - 1.0) <= kPredicateTol;
    }
    if (row_ones != 1 || col_ones != 1) by_pattern = false;
  }
  if (by_action != by_pattern) throw HolantError("permutation test disagrees with the 0/1 pattern test");
  return by_action;
}

JordanFamilyResult epsilon_family_jordan(const MixedTensor& f, double eps) {
  if (!(eps > 0)) throw HolantError("eps must be positive");
  const Matrix m = to_matrix(f);
  const int q = f.q();
  bool upper = true;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < i; ++j) upper = upper && m(i, j) == Complex{};
  Matrix qmat = Matrix::Identity(q, q);
  Matrix u = m;
  if (!upper) {
    Eigen::ComplexSchur<Matrix> schur(m);
    qmat = schur.matrixU();
    u = schur.matrixT();
  }
  Matrix d = Matrix::Zero(q, q);
  for (int i = 0; i < q; ++i) d(i, i) = std::pow(eps, q - 1 - i);
  TransformOptions loose;
  loose.max_condition = std::numeric_limits<double>::infinity();
  HoloTransform t(d * qmat.adjoint(), loose);
  MixedTensor result = act(t, f);
  Matrix lim = Matrix::Zero(q, q);
  for (int i = 0; i < q; ++i) lim(i, i) = u(i, i);
  const MixedTensor limit = from_matrix(lim);
  double dist2 = 0;
  for (std::size_t k = 0; k < result.size(); ++k) dist2 += std::norm(result[k] - limit[k]);
  JordanFamilyResult out{t, result, limit, std::sqrt(dist2), t.warnings()};
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      const double scale = std::max({1.0, std::abs(u(i, i)), std::abs(u(j, j))});
      if (std::abs(u(i, i) - u(j, j)) <= 1e-6 * scale) {
        out.warnings.push_back("repeated eigenvalue: the input may be defective and its eigenproblem ill-conditioned");
        i = q;
        break;
      }
    }
  }
  return out;
}

CounterexampleReport epsilon_family_counterexample(Complex a, Complex b, double eps) {
  if (!(eps > 0)) throw HolantError("eps must be positive");
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 / eps;
  m(1, 1) = eps;
  TransformOptions loose;
  loose.max_condition = std::numeric_limits<double>::infinity();
  HoloTransform t(m, loose);
  SignatureSet fs;
  fs.add("ne", disequality_signature(2, {2, 0}));
  fs.add("F", SymBoolSignature{{a, b, 1, 0, 0}, {0, 4}}.expand());
  CounterexampleReport r{eps, a, b, {}, 0, 0, false, t, act_set(t, fs)};
  const auto& ft = r.transformed.at("F");
  for (std::size_t flat : {0u, 1u, 3u, 7u, 15u}) r.fvector.push_back(ft[flat]);
  const auto target = SymBoolSignature{{0, 0, 1, 0, 0}, {0, 4}}.expand();
  double d2 = 0;
  for (std::size_t k = 0; k < ft.size(); ++k) d2 += std::norm(ft[k] - target[k]);
  r.distance = std::sqrt(d2);
  const double e2 = eps * eps;
  r.predicted_distance = std::sqrt(std::norm(a * e2 * e2) + 4.0 * std::norm(b * e2));
  r.disequality_fixed = max_entry_gap(r.transformed.at("ne"), fs.at("ne")) <= kPredicateTol;
  return r;
}

}  // namespace holant
