#include "holant/span.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

#include "holant/parallel.hpp"

namespace holant {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

int domain_of(const SignatureSet& fs) {
  if (!fs.q()) throw HolantError("signature set has no domain size (empty set without q)");
  return *fs.q();
}

Vec to_vec(const MixedTensor& t) {
  Vec v(static_cast<Eigen::Index>(t.size()));
  for (std::size_t k = 0; k < t.size(); ++k) v(static_cast<Eigen::Index>(k)) = t[k];
  return v;
}

// Incremental Gram-Schmidt with a threshold relative to the largest norm
// seen so far (floored at 1).
class IndependentSet {
 public:
  explicit IndependentSet(double tol) : tol_(tol) {}

  bool add(const Vec& v) {
    scale_ = std::max(scale_, v.norm());
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : ortho_) r -= b * b.dot(r);
    }
    const double n = r.norm();
    if (n <= tol_ * std::max(scale_, 1.0)) return false;
    ortho_.push_back(r / n);
    return true;
  }

 private:
  double tol_;
  double scale_ = 0;
  std::vector<Vec> ortho_;
};

std::size_t numeric_rank(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0) return 0;
  const double thr = tol * std::max(sv(0), 1.0);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) r += sv(k) > thr;
  return r;
}

// Columns spanning {c : m c = 0}.
Mat null_space(const Mat& m, double tol, std::size_t* rank_out = nullptr) {
  const auto cols = m.cols();
  if (m.rows() == 0) {
    if (rank_out) *rank_out = 0;
    return Mat::Identity(cols, cols);
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto r = numeric_rank(svd.singularValues(), tol);
  if (rank_out) *rank_out = r;
  return svd.matrixV().rightCols(cols - static_cast<Eigen::Index>(r));
}

// Scales c so that its largest entry (first among ties) is exactly 1.
Vec normalized(Vec c) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < c.size(); ++k) {
    if (std::abs(c(k)) > std::abs(c(best)) * (1 + 1e-12)) best = k;
  }
  return c / c(best);
}

std::vector<MixedTensor> signatures_of(const std::vector<SignatureGrid>& grids, const SignatureSet& sigs,
                                       const Bijection* rename) {
  std::vector<std::optional<MixedTensor>> out(grids.size());
  parallel_for(grids.size(), [&](std::size_t i) {
    out[i] = rename ? gadget_signature(rename_signatures(grids[i], *rename), sigs) : gadget_signature(grids[i], sigs);
  });
  std::vector<MixedTensor> r;
  r.reserve(out.size());
  for (auto& t : out) r.push_back(std::move(*t));
  return r;
}

QuantumGadget combination(const std::vector<QuantumGadget>& ws, const Vec& c) {
  QuantumGadget k;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Complex ci = c(static_cast<Eigen::Index>(i));
    if (ci == Complex{}) continue;
    for (const auto& t : ws[i].terms) k.terms.push_back({ci * t.coefficient, t.grid});
  }
  return k;
}

MixedTensor tensor_combination(const std::vector<MixedTensor>& ts, const Vec& c, int q, Shape shape) {
  std::vector<Complex> e(checked_power(q, shape.arity()));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Complex ci = c(static_cast<Eigen::Index>(i));
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += ci * ts[i][k];
  }
  return MixedTensor(q, shape, std::move(e));
}

Mat columns(const std::vector<MixedTensor>& ts, std::size_t rows) {
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(ts.size()));
  for (std::size_t j = 0; j < ts.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = to_vec(ts[j]);
  return m;
}

}  // namespace

Bijection identity_bijection(const SignatureSet& fs) {
  Bijection b;
  for (const auto& e : fs) b[e.name] = e.name;
  return b;
}

void check_bijection(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij) {
  if (fs.q() && gs.q() && *fs.q() != *gs.q()) throw HolantError("signature sets have different domain sizes");
  if (fs.size() != gs.size() || bij.size() != fs.size()) throw HolantError("bijection does not match set sizes");
  std::set<std::string> images;
  for (const auto& e : fs) {
    auto it = bij.find(e.name);
    if (it == bij.end()) throw HolantError("bijection misses signature '" + e.name + "'");
    const auto* g = gs.find(it->second);
    if (!g) throw HolantError("bijection maps '" + e.name + "' to unknown '" + it->second + "'");
    if (g->shape() != e.tensor.shape()) {
      throw HolantError("bijection maps '" + e.name + "' " + to_string(e.tensor.shape()) + " to '" + it->second +
                        "' " + to_string(g->shape()));
    }
    if (!images.insert(it->second).second) throw HolantError("bijection is not injective");
  }
}

GadgetSpan build_span(const SignatureSet& fs, Shape profile, int max_vertices, const SpanOptions& opts) {
  GadgetSpan span;
  span.q = domain_of(fs);
  span.profile = profile;
  span.max_vertices = max_vertices;
  const auto grids = enumerate_gadgets(span.q, slots_of(fs), profile, max_vertices, opts.enumerate);
  span.gadgets_seen = grids.size();
  const auto sigs = signatures_of(grids, fs, nullptr);
  IndependentSet ind(opts.tol);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (!ind.add(to_vec(sigs[i]))) continue;
    span.basis.push_back(sigs[i]);
    span.witnesses.push_back(QuantumGadget::of(grids[i]));
  }
  return span;
}

GadgetSpan build_paired_span(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij, Shape profile,
                             int max_vertices, const SpanOptions& opts) {
  check_bijection(fs, gs, bij);
  GadgetSpan span;
  span.q = domain_of(fs);
  span.profile = profile;
  span.max_vertices = max_vertices;
  const auto grids = enumerate_gadgets(span.q, slots_of(fs), profile, max_vertices, opts.enumerate);
  span.gadgets_seen = grids.size();
  const auto sf = signatures_of(grids, fs, nullptr);
  const auto sg = signatures_of(grids, gs, &bij);
  IndependentSet ind(opts.tol);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    Vec v(static_cast<Eigen::Index>(sf[i].size() + sg[i].size()));
    v << to_vec(sf[i]), to_vec(sg[i]);
    if (!ind.add(v)) continue;
    span.basis.push_back(sf[i]);
    span.partner.push_back(sg[i]);
    span.witnesses.push_back(QuantumGadget::of(grids[i]));
  }
  return span;
}

std::string to_string(GramVerdict v) {
  switch (v) {
    case GramVerdict::nonvanishing_at_bound:
      return "nonvanishing_at_bound";
    case GramVerdict::vanishing_witness:
      return "vanishing_witness";
    case GramVerdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

GramReport gram_nondegenerate(const SignatureSet& fs, Shape profile, int max_vertices, const SpanOptions& opts) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    SpanOptions o = opts;
    // The retry prunes the basis more aggressively to shed spurious kernels.
    if (attempt == 1) o.tol = opts.tol * 100;
    const GadgetSpan a = build_span(fs, profile, max_vertices, o);
    const GadgetSpan b = build_span(fs, profile.transposed(), max_vertices, o);
    GramReport r;
    r.dim = a.dim();
    r.partner_dim = b.dim();
    if (a.dim() == 0) return r;
    Mat gram(static_cast<Eigen::Index>(a.dim()), static_cast<Eigen::Index>(b.dim()));
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < b.dim(); ++j)
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pair(a.basis[i], b.basis[j]);
    Mat kernel;
    if (b.dim() == 0) {
      kernel = Mat::Identity(static_cast<Eigen::Index>(a.dim()), static_cast<Eigen::Index>(a.dim()));
      r.rank = 0;
    } else {
      Eigen::JacobiSVD<Mat> svd(gram);
      r.singular_values.assign(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
      kernel = null_space(gram.transpose(), o.tol, &r.rank);
    }
    if (kernel.cols() == 0) {
      r.verdict = GramVerdict::nonvanishing_at_bound;
      return r;
    }
    double scale = 1;
    for (const auto& t : a.basis) scale = std::max(scale, t.norm());
    for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
      const Vec c = normalized(kernel.col(k));
      MixedTensor sig = tensor_combination(a.basis, c, a.q, profile);
      if (sig.norm() <= o.tol * scale * c.norm()) continue;  // spurious: basis redundancy
      r.verdict = GramVerdict::vanishing_witness;
      r.witness = combination(a.witnesses, c);
      for (const auto& t : b.basis) r.witness_pairing = std::max(r.witness_pairing, std::abs(pair(sig, t)));
      r.witness_signature = std::move(sig);
      return r;
    }
    if (attempt == 1) {
      r.verdict = GramVerdict::inconclusive;
      return r;
    }
  }
  return {};
}

IndistReport check_indistinguishable(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij,
                                     int max_vertices, double tol) {
  check_bijection(fs, gs, bij);
  const int q = domain_of(fs);
  IndistReport r;
  std::vector<SignatureGrid> batch;
  constexpr std::size_t kBatch = 256;
  auto flush = [&]() {
    std::vector<Complex> hf(batch.size()), hg(batch.size());
    parallel_for(batch.size(), [&](std::size_t i) {
      hf[i] = holant_eval_contracted(batch[i], fs);
      hg[i] = holant_eval_contracted(rename_signatures(batch[i], bij), gs);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const double d = std::abs(hf[i] - hg[i]);
      r.max_abs_difference = std::max(r.max_abs_difference, d);
      ++r.grids;
      if (d > tol * (1.0 + std::max(std::abs(hf[i]), std::abs(hg[i])))) {
        r.indistinguishable = false;
        r.distinguisher = Distinguisher{batch[i], hf[i], hg[i], r.grids - 1};
        batch.clear();
        return false;
      }
    }
    batch.clear();
    return true;
  };
  enumerate_grids(q, slots_of(fs), max_vertices, [&](const SignatureGrid& g) {
    batch.push_back(g);
    return batch.size() < kBatch || flush();
  });
  if (r.indistinguishable && !batch.empty()) flush();
  return r;
}

CovanishingReport check_covanishing(const SignatureSet& fs, const SignatureSet& gs, const Bijection& bij,
                                    Shape profile, int max_vertices, const SpanOptions& opts) {
  const GadgetSpan span = build_paired_span(fs, gs, bij, profile, max_vertices, opts);
  CovanishingReport r;
  r.dim = span.dim();
  if (span.dim() == 0) return r;
  const std::size_t rows = span.basis.front().size();
  const Mat mf = columns(span.basis, rows);
  const Mat mg = columns(span.partner, rows);
  Mat nf = null_space(mf, opts.tol, &r.rank_f);
  Mat ng = null_space(mg, opts.tol, &r.rank_g);
  if (nf.cols() == 0 && ng.cols() == 0) return r;
  r.covanishing = false;
  r.zero_side = nf.cols() > 0 ? 'f' : 'g';
  const Vec c = normalized(nf.cols() > 0 ? Vec(nf.col(0)) : Vec(ng.col(0)));
  r.witness = combination(span.witnesses, c);
  r.signature_f = tensor_combination(span.basis, c, span.q, profile);
  r.signature_g = tensor_combination(span.partner, c, span.q, profile);
  return r;
}

QuantumGadget conjugate_gadget(const QuantumGadget& k, const std::map<std::string, std::string>& conj_names) {
  QuantumGadget out;
  for (const auto& t : k.terms) out.terms.push_back({std::conj(t.coefficient), rename_signatures(t.grid, conj_names)});
  return out;
}

namespace {

bool close_to(const MixedTensor& a, const MixedTensor& b) {
  if (a.shape() != b.shape() || a.q() != b.q()) return false;
  return a.approx_equal(b, 1e-9 * std::max(1.0, a.max_abs()));
}

std::optional<std::string> find_equal(const SignatureSet& fs, const MixedTensor& t) {
  for (const auto& e : fs) {
    if (close_to(e.tensor, t)) return e.name;
  }
  return std::nullopt;
}

std::optional<std::string> find_nonsingular(const SignatureSet& fs, Shape shape) {
  for (const auto& e : fs) {
    if (e.tensor.shape() != shape) continue;
    Mat m(e.tensor.q(), e.tensor.q());
    for (int i = 0; i < e.tensor.q(); ++i)
      for (int j = 0; j < e.tensor.q(); ++j) m(i, j) = e.tensor[static_cast<std::size_t>(i * e.tensor.q() + j)];
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0))) return e.name;
  }
  return std::nullopt;
}

// `copies` disjoint copies of a two-ended block gadget.
SignatureGrid repeat(const SignatureGrid& block, int copies, int q) {
  SignatureGrid g;
  g.q = q;
  for (int k = 0; k < copies; ++k) g = disjoint_union(g, block);
  return g;
}

// Three-vertex chain  conj(A) - =2 - A  with two free ends of the A type.
SignatureGrid chain_block(int q, const std::string& abar, const std::string& eq, const std::string& a, bool covariant) {
  SignatureGrid g;
  g.q = q;
  if (covariant) {
    // A, conj(A) are (0,2); =2 is (2,0). Free right ends: conj(A).1, A.1.
    const int x = g.add_vertex(abar, {0, 2});
    const int e = g.add_vertex(eq, {2, 0});
    const int y = g.add_vertex(a, {0, 2});
    g.edges.push_back({{e, 1}, {x, 2}});
    g.edges.push_back({{e, 2}, {y, 2}});
    g.right_dangling = {Stub::at(x, 1), Stub::at(y, 1)};
  } else {
    const int x = g.add_vertex(abar, {2, 0});
    const int e = g.add_vertex(eq, {0, 2});
    const int y = g.add_vertex(a, {2, 0});
    g.edges.push_back({{x, 2}, {e, 1}});
    g.edges.push_back({{y, 2}, {e, 2}});
    g.left_dangling = {Stub::at(x, 1), Stub::at(y, 1)};
  }
  return g;
}

}  // namespace

DualCertificate dual_nonvanishing_certificate(const SignatureSet& fs, const QuantumGadget& k) {
  const int q = domain_of(fs);
  k.validate();
  const Shape p = k.profile();
  const MixedTensor ksig = gadget_signature(k, fs);
  if (ksig.norm() <= 1e-12) throw HolantError("dual certificate needs a nonzero signature");

  std::map<std::string, std::string> conj;
  for (const auto& e : fs) {
    if (auto n = find_equal(fs, conjugate(e.tensor))) {
      conj[e.name] = *n;
    } else {
      throw HolantError("signature set is not conjugate-closed: no conjugate of '" + e.name + "'");
    }
  }
  const auto eq_contra = find_equal(fs, equality_signature(q, 2, {2, 0}));
  const auto eq_co = find_equal(fs, equality_signature(q, 2, {0, 2}));

  // Block turning a right end into a left end, and one turning a left end
  // into a right end.
  SignatureGrid to_left, to_right;
  if (p.right > 0) {
    if (eq_contra) {
      to_left = vertex_gadget(q, *eq_contra, {2, 0});
    } else if (auto a = find_nonsingular(fs, {2, 0}); a && eq_co) {
      to_left = chain_block(q, conj.at(*a), *eq_co, *a, false);
    } else {
      throw HolantError("dual certificate needs a contravariant =2 (or a covariant =2 and a nonsingular (2,0) signature)");
    }
  }
  if (p.left > 0) {
    if (eq_co) {
      to_right = vertex_gadget(q, *eq_co, {0, 2});
    } else if (auto a = find_nonsingular(fs, {0, 2}); a && eq_contra) {
      to_right = chain_block(q, conj.at(*a), *eq_contra, *a, true);
    } else {
      throw HolantError("dual certificate needs a covariant =2 (or a contravariant =2 and a nonsingular (0,2) signature)");
    }
  }

  DualCertificate out;
  const QuantumGadget kbar = conjugate_gadget(k, conj);
  for (const auto& t : kbar.terms) {
    SignatureGrid g = t.grid;
    if (p.right > 0) {
      std::vector<std::pair<int, int>> w;
      for (int j = 1; j <= p.right; ++j) w.push_back({j, 2 * j - 1});
      g = compose(g, repeat(to_left, p.right, q), w);
    }
    if (p.left > 0) {
      std::vector<std::pair<int, int>> w;
      for (int i = 1; i <= p.left; ++i) w.push_back({2 * i - 1, i});
      g = compose(repeat(to_right, p.left, q), g, w);
    }
    out.dual.terms.push_back({t.coefficient, std::move(g)});
  }
  out.dual_signature = gadget_signature(out.dual, fs);
  out.pairing = pair(ksig, out.dual_signature);
  if (std::abs(out.pairing) <= 1e-9 * std::max(1.0, ksig.norm() * ksig.norm())) {
    throw HolantError("dual pairing vanished; the hypotheses do not hold for this set");
  }
  return out;
}

}  // namespace holant
