#pragma once

// Bounded gadget spans <F>_{l,r}, pairing Gram matrices, bounded
// indistinguishability and covanishing tests.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holant/enumerate.hpp"
#include "holant/grid.hpp"

namespace holant {

/// Singular values below kRankTol * max(sigma_max, 1) count as zero.
inline constexpr double kRankTol = 1e-7;

/// Name map from one signature set to a second one.
using Bijection = std::map<std::string, std::string>;

/// Identity map on the names of fs.
Bijection identity_bijection(const SignatureSet& fs);
/// Throws unless `bij` maps every name of fs onto a distinct name of gs with
/// the same shape, and both sets share q.
void check_bijection(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij);

struct SpanOptions {
  EnumerateOptions enumerate;
  /// Relative threshold for accepting a new basis direction.
  double tol = kRankTol;
};

struct GadgetSpan {
  int q = 2;
  Shape profile;
  int max_vertices = 0;
  /// Signatures of the independent witnesses, over the first set.
  std::vector<MixedTensor> basis;
  std::vector<QuantumGadget> witnesses;
  /// Paired mode: signatures of the same gadgets over the second set.
  std::vector<MixedTensor> partner;
  /// Number of gadgets enumerated before pruning.
  std::size_t gadgets_seen = 0;

  std::size_t dim() const { return basis.size(); }
};

GadgetSpan build_span(const SignatureSet& fs, Shape profile, int max_vertices, const SpanOptions& opts = {});

/// Basis chosen on the stacked vectors (K over fs, K over gs) so the
/// correspondence between the two spans is preserved.
GadgetSpan build_paired_span(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij, Shape profile,
                             int max_vertices, const SpanOptions& opts = {});

enum class GramVerdict { nonvanishing_at_bound, vanishing_witness, inconclusive };
std::string to_string(GramVerdict v);

struct GramReport {
  GramVerdict verdict = GramVerdict::nonvanishing_at_bound;
  std::size_t dim = 0;          // span at the requested profile
  std::size_t partner_dim = 0;  // span at the transposed profile
  std::size_t rank = 0;
  std::vector<double> singular_values;
  /// Set for vanishing_witness: a nonzero combination pairing to ~0 with the
  /// whole bounded span at the transposed profile.
  std::optional<QuantumGadget> witness;
  std::optional<MixedTensor> witness_signature;
  /// max |<witness, B_j>| over the transposed-profile basis.
  double witness_pairing = 0;
};

GramReport gram_nondegenerate(const SignatureSet& fs, Shape profile, int max_vertices, const SpanOptions& opts = {});

struct Distinguisher {
  SignatureGrid grid;  // over fs; rename through the bijection for gs
  Complex value_f;
  Complex value_g;
  std::size_t index = 0;  // position in the enumeration
};

struct IndistReport {
  bool indistinguishable = true;
  std::size_t grids = 0;
  double max_abs_difference = 0;
  std::optional<Distinguisher> distinguisher;
};

/// Compares Holant values over every closed grid up to the bound; stops at
/// the first grid with |H_F - H_G| > tol * (1 + max(|H_F|, |H_G|)).
IndistReport check_indistinguishable(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij,
                                     int max_vertices, double tol = 1e-9);

struct CovanishingReport {
  bool covanishing = true;
  std::size_t dim = 0;
  std::size_t rank_f = 0;
  std::size_t rank_g = 0;
  /// A combination that vanishes on `zero_side` but not on the other side.
  std::optional<QuantumGadget> witness;
  std::optional<MixedTensor> signature_f;
  std::optional<MixedTensor> signature_g;
  char zero_side = 0;  // 'f' or 'g'
};

CovanishingReport check_covanishing(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij,
                                    Shape profile, int max_vertices, const SpanOptions& opts = {});

struct DualCertificate {
  QuantumGadget dual;
  MixedTensor dual_signature = MixedTensor::scalar(0);
  Complex pairing;
};

/// Builds K* with <K, K*> != 0 for a nonzero quantum gadget K over a
/// conjugate-closed set containing =2 on one side and, on the other side,
/// either =2 or a binary signature with nonsingular matrix form.
DualCertificate dual_nonvanishing_certificate(const SignatureSet& fs, const QuantumGadget& k);

/// Replaces every vertex signature (and conjugates the coefficients).
QuantumGadget conjugate_gadget(const QuantumGadget& k, const std::map<std::string, std::string>& conj_names);

}  // namespace holant
