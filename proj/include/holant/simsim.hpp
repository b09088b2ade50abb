#pragma once

// Matrix sets: generated algebras, trace-form radicals, trace words and
// recovery of a simultaneous similarity T F_i T^-1 = G_i.

#include <optional>
#include <string>
#include <vector>

#include "holant/holo.hpp"

namespace holant {

/// Generator indices; the empty word is I.
using Word = std::vector<int>;

std::string word_string(const Word& w, const std::vector<std::string>& names);

/// Candidates whose residual after projection is below this fraction of their
/// norm are dependent.
inline constexpr double kClosureTol = 1e-8;

struct MatrixAlgebra {
  int q = 1;
  std::vector<std::string> names;
  std::vector<Word> words;
  std::vector<Matrix> basis;  // basis[k] = words[k] evaluated
  /// Frobenius-orthonormal basis of the same span (Gram-Schmidt in word order).
  std::vector<Matrix> orthonormal;
  /// tr(Q_i Q_j) over the orthonormal basis; a word basis is too
  /// ill-conditioned for rank decisions.
  Matrix gram;

  std::size_t dim() const { return basis.size(); }
};

/// Breadth-first word closure, generators in the given order. `names`
/// defaults to A, B, C, ...
MatrixAlgebra algebra_closure(int q, const std::vector<Matrix>& gens, std::vector<std::string> names = {},
                              double tol = kClosureTol);

/// max over basis elements X and generators g of the relative distance of
/// X g from the span.
double closure_residual(const MatrixAlgebra& a, const std::vector<Matrix>& gens);

struct NonvanishingReport {
  bool nonvanishing = true;
  std::size_t rank = 0;
  /// Kernel of the trace form as unit-norm algebra elements, with their
  /// coefficients over the orthonormal basis.
  std::vector<Matrix> radical;
  std::vector<Eigen::VectorXcd> coefficients;
};

NonvanishingReport is_11_nonvanishing(const MatrixAlgebra& a);

struct TraceReport {
  bool equal = true;
  int max_len = 0;
  /// Number of independent word pairs whose traces were compared; every
  /// other word up to max_len is a combination of them.
  std::size_t words_checked = 0;
  /// True when the paired closure saturated, so the verdict covers every
  /// word of any length.
  bool saturated = false;
  std::optional<Word> word;
  Complex trace_f, trace_g;
};

/// max_len < 0 means q^2.
TraceReport trace_words_equal(const std::vector<Matrix>& fs, const std::vector<Matrix>& gs, int max_len = -1,
                              double tol = 1e-8);

enum class RecoveryStatus { similar, trace_mismatch, vanishing, not_covanishing, verification_failed };
std::string to_string(RecoveryStatus s);

struct RecoveryOptions {
  /// Final acceptance: max_i ||T F_i T^-1 - G_i||_F / max(1, ||G_i||_F).
  double tol = 1e-6;
  /// Eigenvalues closer than this (relative) are one cluster.
  double cluster_tol = 1e-6;
  /// Block idempotents must agree with the exact projectors to this.
  double idempotent_tol = 1e-7;
};

struct RecoveryReport {
  RecoveryStatus status = RecoveryStatus::similar;
  std::optional<Matrix> transform;
  double residual = 0;
  double condition = 0;
  /// Final partition as contiguous coordinate ranges [first, first + size).
  std::vector<std::pair<int, int>> blocks;
  std::string detail;

  // trace_mismatch
  std::optional<Word> word;
  // vanishing: an element of the radical of side 'f' or 'g'
  char side = 0;
  std::optional<Matrix> radical_element;
  // not_covanishing: a word combination that is zero on `side` only
  std::vector<Word> words;
  std::optional<Eigen::VectorXcd> coefficients;
};

RecoveryReport recover_transform(const std::vector<Matrix>& fs, const std::vector<Matrix>& gs,
                                 const RecoveryOptions& opts = {});

}  // namespace holant
