#pragma once

// Holographic transformations T . F = T^{(x)l} F (T^-1)^{(x)r}.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "holant/grid.hpp"

namespace holant {

using Matrix = Eigen::MatrixXcd;

Matrix to_matrix(const MixedTensor& t);
MixedTensor from_matrix(const Matrix& m);

struct TransformOptions {
  /// Condition numbers above this are rejected.
  double max_condition = 1e12;
  /// Condition numbers above this are accepted with a warning.
  double warn_condition = 1e8;
};

class HoloTransform {
 public:
  explicit HoloTransform(Matrix m, const TransformOptions& opts = {});
  static HoloTransform identity(int q);

  int q() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const Matrix& inverse() const { return inverse_; }
  double condition() const { return condition_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Matrix matrix_;
  Matrix inverse_;
  double condition_ = 1;
  std::vector<std::string> warnings_;
};

/// Matrix product, so act(a * b, F) = act(a, act(b, F)).
HoloTransform operator*(const HoloTransform& a, const HoloTransform& b);

MixedTensor act(const HoloTransform& t, const MixedTensor& f);
SignatureSet act_set(const HoloTransform& t, const SignatureSet& fs);

struct TheoremReport {
  std::size_t grids = 0;
  double max_abs_discrepancy = 0;
  /// max |H_F - H_TF| / (1 + |H_F|)
  double max_scaled_discrepancy = 0;
  std::size_t worst_grid = 0;
  bool passed = true;
};

/// Compares Holant values of every enumerated closed grid over fs with the
/// values under act_set(t, fs).
TheoremReport verify_holant_theorem(const SignatureSet& fs, const HoloTransform& t, int max_vertices,
                                    double tol = 1e-8);

/// Fixed absolute tolerance on tensor entries used by the predicates.
inline constexpr double kPredicateTol = 1e-8;

/// T . (=2) = (=2) on the contravariant binary equality. Cross-checked
/// against T T^t = I; disagreement throws.
bool is_orthogonal_preserver(const HoloTransform& t);
/// T fixes contravariant =2 and =3. Cross-checked against the 0/1
/// permutation pattern; disagreement throws.
bool is_permutation_preserver(const HoloTransform& t);

struct JordanFamilyResult {
  HoloTransform transform;
  MixedTensor result;
  /// Diagonal matrix of the eigenvalues (Schur order) reached as eps -> 0.
  MixedTensor limit;
  double distance = 0;
  std::vector<std::string> warnings;
};

/// Scales a (1,1) signature towards its diagonal part by
/// T = diag(eps^{q-1}, ..., eps, 1) Q*, with Q from a Schur form (Q = I for
/// upper-triangular input).
JordanFamilyResult epsilon_family_jordan(const MixedTensor& f, double eps);

struct CounterexampleReport {
  double eps = 0;
  Complex a, b;
  /// Transformed [f0..f4] of the (0,4) signature.
  std::vector<Complex> fvector;
  /// Entrywise Euclidean distance to [0,0,1,0,0] over all 16 entries.
  double distance = 0;
  /// sqrt(|a eps^4|^2 + 4 |b eps^2|^2)
  double predicted_distance = 0;
  /// Whether diag(1/eps, eps) fixes the contravariant disequality.
  bool disequality_fixed = false;
  HoloTransform transform;
  SignatureSet transformed;
};

CounterexampleReport epsilon_family_counterexample(Complex a, Complex b, double eps);

}  // namespace holant
