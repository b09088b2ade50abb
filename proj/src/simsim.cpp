#include "holant/simsim.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace holant {

std::string word_string(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "I";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += "*";
    const auto g = static_cast<std::size_t>(w[k]);
    s += g < names.size() ? names[g] : "g" + std::to_string(g);
  }
  return s;
}

namespace {

using Vec = Eigen::VectorXcd;

Vec flatten(const std::vector<Matrix>& parts) {
  Eigen::Index n = 0;
  for (const auto& m : parts) n += m.size();
  Vec v(n);
  Eigen::Index at = 0;
  for (const auto& m : parts) {
    v.segment(at, m.size()) = Eigen::Map<const Vec>(m.data(), m.size());
    at += m.size();
  }
  return v;
}

// Word closure over one or more parallel sides (the same word evaluated in
// each side's generators).
struct Closure {
  std::vector<Word> words;
  std::vector<std::vector<Matrix>> elems;  // elems[k][side]
  bool saturated = true;
};

class Orthonormal {
 public:
  explicit Orthonormal(double tol) : tol_(tol) {}
  bool add(const Vec& v) {
    const double n = v.norm();
    if (n == 0) return false;
    Vec r = v / n;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : ortho_) r -= b * b.dot(r);
    const double rn = r.norm();
    if (rn <= tol_) return false;
    ortho_.push_back(r / rn);
    return true;
  }

 private:
  double tol_;
  std::vector<Vec> ortho_;
};

Closure word_closure(int q, const std::vector<const std::vector<Matrix>*>& sides, int max_len, double tol) {
  Closure c;
  Orthonormal ind(tol);
  std::vector<Matrix> id(sides.size(), Matrix::Identity(q, q));
  ind.add(flatten(id));
  c.words.push_back({});
  c.elems.push_back(id);
  const std::size_t ngen = sides.empty() ? 0 : sides[0]->size();
  for (std::size_t next = 0; next < c.words.size(); ++next) {
    for (std::size_t g = 0; g < ngen; ++g) {
      std::vector<Matrix> cand(sides.size());
      for (std::size_t s = 0; s < sides.size(); ++s) cand[s] = c.elems[next][s] * (*sides[s])[g];
      const bool too_long = static_cast<int>(c.words[next].size()) + 1 > max_len;
      if (!ind.add(flatten(cand))) continue;
      if (too_long) {
        c.saturated = false;
        continue;
      }
      Word w = c.words[next];
      w.push_back(static_cast<int>(g));
      c.words.push_back(std::move(w));
      c.elems.push_back(std::move(cand));
    }
  }
  return c;
}

void check_generators(int q, const std::vector<Matrix>& gens, const char* what) {
  for (const auto& m : gens) {
    if (m.rows() != q || m.cols() != q) throw HolantError(std::string(what) + ": generators must be " +
                                                          std::to_string(q) + "x" + std::to_string(q));
  }
}

int common_q(const std::vector<Matrix>& fs, const std::vector<Matrix>& gs) {
  if (fs.size() != gs.size()) throw HolantError("matrix sets have different sizes");
  if (fs.empty()) throw HolantError("empty matrix sets carry no dimension");
  const int q = static_cast<int>(fs[0].rows());
  check_generators(q, fs, "first set");
  check_generators(q, gs, "second set");
  return q;
}

double fro(const Matrix& m) { return m.norm(); }

}  // namespace

MatrixAlgebra algebra_closure(int q, const std::vector<Matrix>& gens, std::vector<std::string> names, double tol) {
  if (q < 1) throw HolantError("matrix size must be positive");
  check_generators(q, gens, "algebra_closure");
  if (names.empty()) {
    for (std::size_t k = 0; k < gens.size(); ++k) names.push_back(std::string(1, static_cast<char>('A' + k % 26)));
  }
  if (names.size() != gens.size()) throw HolantError("one name per generator expected");
  const Closure c = word_closure(q, {&gens}, q * q + 1, tol);
  MatrixAlgebra a;
  a.q = q;
  a.names = std::move(names);
  a.words = c.words;
  for (const auto& e : c.elems) a.basis.push_back(e[0]);
  const auto q2 = static_cast<Eigen::Index>(q) * q;
  for (const auto& x : a.basis) {
    Matrix r = x / fro(x);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& o : a.orthonormal) {
        const Complex c = Eigen::Map<const Vec>(o.data(), q2).dot(Eigen::Map<const Vec>(r.data(), q2));
        r -= c * o;
      }
    }
    a.orthonormal.push_back(r / fro(r));
  }
  const auto d = static_cast<Eigen::Index>(a.dim());
  a.gram.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      a.gram(i, j) = (a.orthonormal[static_cast<std::size_t>(i)] * a.orthonormal[static_cast<std::size_t>(j)]).trace();
  return a;
}

double closure_residual(const MatrixAlgebra& a, const std::vector<Matrix>& gens) {
  const auto q2 = static_cast<Eigen::Index>(a.q) * a.q;
  Matrix cols(q2, static_cast<Eigen::Index>(a.dim()));
  for (std::size_t k = 0; k < a.dim(); ++k) {
    cols.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vec>(a.basis[k].data(), q2) / fro(a.basis[k]);
  }
  const auto qr = cols.colPivHouseholderQr();
  double worst = 0;
  for (const auto& x : a.basis) {
    for (const auto& g : gens) {
      const Matrix p = x * g;
      const double n = fro(p);
      if (n == 0) continue;
      const Vec v = Eigen::Map<const Vec>(p.data(), q2) / n;
      worst = std::max(worst, (cols * qr.solve(v) - v).norm());
    }
  }
  return worst;
}

NonvanishingReport is_11_nonvanishing(const MatrixAlgebra& a) {
  NonvanishingReport r;
  const auto d = static_cast<Eigen::Index>(a.dim());
  if (d == 0) return r;
  Eigen::JacobiSVD<Matrix> svd(a.gram, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = 1e-7 * std::max(sv(0), 1.0);
  for (Eigen::Index k = 0; k < d; ++k) r.rank += sv(k) > thr;
  r.nonvanishing = static_cast<Eigen::Index>(r.rank) == d;
  for (Eigen::Index k = static_cast<Eigen::Index>(r.rank); k < d; ++k) {
    Vec c = svd.matrixV().col(k);
    Matrix m = Matrix::Zero(a.q, a.q);
    for (Eigen::Index i = 0; i < d; ++i) m += c(i) * a.orthonormal[static_cast<std::size_t>(i)];
    const double n = fro(m);
    r.radical.push_back(m / n);
    r.coefficients.push_back(c / n);
  }
  return r;
}

TraceReport trace_words_equal(const std::vector<Matrix>& fs, const std::vector<Matrix>& gs, int max_len,
                              double tol) {
  const int q = common_q(fs, gs);
  TraceReport r;
  r.max_len = max_len < 0 ? q * q : max_len;
  const Closure c = word_closure(q, {&fs, &gs}, r.max_len, kClosureTol);
  r.saturated = c.saturated;
  for (std::size_t k = 0; k < c.words.size(); ++k) {
    const auto& e = c.elems[k];
    const Complex tf = e[0].trace(), tg = e[1].trace();
    ++r.words_checked;
    const double scale = std::max({1.0, std::abs(tf), std::abs(tg), fro(e[0]), fro(e[1])});
    if (std::abs(tf - tg) > tol * scale) {
      r.equal = false;
      r.word = c.words[k];
      r.trace_f = tf;
      r.trace_g = tg;
      return r;
    }
  }
  return r;
}

std::string to_string(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::similar:
      return "similar";
    case RecoveryStatus::trace_mismatch:
      return "trace_mismatch";
    case RecoveryStatus::vanishing:
      return "vanishing";
    case RecoveryStatus::not_covanishing:
      return "not_covanishing";
    case RecoveryStatus::verification_failed:
      return "verification_failed";
  }
  return "?";
}

namespace {

struct Cluster {
  Complex center;
  int size = 0;
};

std::vector<Cluster> cluster(const Eigen::VectorXcd& ev, double tol) {
  std::vector<Cluster> out;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const Complex x = ev(k);
    bool placed = false;
    for (auto& c : out) {
      if (std::abs(x - c.center) <= tol * std::max({1.0, std::abs(x), std::abs(c.center)})) {
        c.center = (c.center * static_cast<double>(c.size) + x) / static_cast<double>(c.size + 1);
        ++c.size;
        placed = true;
        break;
      }
    }
    if (!placed) out.push_back({x, 1});
  }
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return out;
}

// Greedy nearest matching of the eigenvalues of one side onto the clusters
// of the other; true when every cluster receives exactly its multiplicity.
bool spectra_match(const std::vector<Cluster>& cs, const Eigen::VectorXcd& ev, double tol) {
  std::vector<int> got(cs.size(), 0);
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const double d = std::abs(ev(k) - cs[j].center);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    if (bd > tol * std::max(1.0, std::abs(cs[best].center))) return false;
    ++got[best];
  }
  for (std::size_t j = 0; j < cs.size(); ++j)
    if (got[j] != cs[j].size) return false;
  return true;
}

Matrix matrix_power(const Matrix& m, int k) {
  Matrix r = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

struct Block {
  int start = 0;
  int size = 0;
};

class Recovery {
 public:
  Recovery(const std::vector<Matrix>& fs, const std::vector<Matrix>& gs, const RecoveryOptions& opts)
      : fs_(fs), gs_(gs), opts_(opts), q_(common_q(fs, gs)) {}

  RecoveryReport run() {
    RecoveryReport r;
    const Closure paired = word_closure(q_, {&fs_, &gs_}, 2 * q_ * q_ + 1, kClosureTol);
    for (std::size_t k = 0; k < paired.words.size(); ++k) {
      const auto& e = paired.elems[k];
      const Complex tf = e[0].trace(), tg = e[1].trace();
      const double scale = std::max({1.0, std::abs(tf), std::abs(tg), fro(e[0]), fro(e[1])});
      if (std::abs(tf - tg) > 1e-8 * scale) {
        r.status = RecoveryStatus::trace_mismatch;
        r.word = paired.words[k];
        r.detail = "traces differ on a word of length " + std::to_string(paired.words[k].size());
        return r;
      }
    }

    const auto af = algebra_closure(q_, fs_), ag = algebra_closure(q_, gs_);
    for (const auto& [side, alg] : {std::pair{'f', &af}, std::pair{'g', &ag}}) {
      const auto nv = is_11_nonvanishing(*alg);
      if (!nv.nonvanishing) {
        r.status = RecoveryStatus::vanishing;
        r.side = side;
        r.radical_element = nv.radical.front();
        r.detail = "trace form is degenerate on the generated algebra (rank " + std::to_string(nv.rank) + " of " +
                   std::to_string(alg->dim()) + ")";
        return r;
      }
    }

    if (paired.words.size() != af.dim() || paired.words.size() != ag.dim()) {
      r.status = RecoveryStatus::not_covanishing;
      r.side = af.dim() < paired.words.size() ? 'f' : 'g';
      const int s = r.side == 'f' ? 0 : 1;
      const auto q2 = static_cast<Eigen::Index>(q_) * q_;
      Matrix cols(q2, static_cast<Eigen::Index>(paired.words.size()));
      std::vector<double> norms;
      for (std::size_t k = 0; k < paired.words.size(); ++k) {
        const auto& m = paired.elems[k][static_cast<std::size_t>(s)];
        norms.push_back(std::max(fro(m), 1e-300));
        cols.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vec>(m.data(), q2) / norms.back();
      }
      Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullV);
      Vec c = svd.matrixV().col(svd.matrixV().cols() - 1);
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) /= norms[static_cast<std::size_t>(k)];
      r.words = paired.words;
      r.coefficients = c;
      r.detail = "word correspondence is not well defined: paired dimension " + std::to_string(paired.words.size()) +
                 ", sides " + std::to_string(af.dim()) + " and " + std::to_string(ag.dim());
      return r;
    }

    // Unit-scaled corresponding pairs, in the current coordinates of each side.
    for (const auto& e : paired.elems) {
      const double n = std::sqrt(e[0].squaredNorm() + e[1].squaredNorm());
      bf_.push_back(e[0] / n);
      bg_.push_back(e[1] / n);
    }
    acc_f_ = Matrix::Identity(q_, q_);
    acc_g_ = Matrix::Identity(q_, q_);

    if (auto err = refine()) return fail(*err);
    if (auto err = align()) return fail(*err);

    const Matrix t = acc_g_.partialPivLu().solve(acc_f_);
    Eigen::JacobiSVD<Matrix> svd(t);
    r.condition = svd.singularValues()(0) / svd.singularValues()(q_ - 1);
    const Matrix tinv = t.partialPivLu().inverse();
    for (std::size_t i = 0; i < fs_.size(); ++i) {
      r.residual = std::max(r.residual, fro(t * fs_[i] * tinv - gs_[i]) / std::max(1.0, fro(gs_[i])));
    }
    for (const auto& b : blocks_) r.blocks.push_back({b.start, b.size});
    r.transform = t;
    if (!(r.residual <= opts_.tol)) {
      r.status = RecoveryStatus::verification_failed;
      std::ostringstream os;
      os << "residual " << r.residual << " above " << opts_.tol << " (condition " << r.condition << ")";
      r.detail = os.str();
    }
    return r;
  }

 private:
  RecoveryReport fail(const std::string& why) const {
    RecoveryReport r;
    r.status = RecoveryStatus::verification_failed;
    r.detail = why;
    for (const auto& b : blocks_) r.blocks.push_back({b.start, b.size});
    return r;
  }

  Matrix corner(const Matrix& m, const Block& b) const { return m.block(b.start, b.start, b.size, b.size); }

  // Conjugates side s by I (+) S on block b: X <- S^-1 X S, acc <- S^-1 acc.
  void change_basis(int s, const Block& b, const Matrix& sb) {
    Matrix full = Matrix::Identity(q_, q_);
    full.block(b.start, b.start, b.size, b.size) = sb;
    const Matrix inv = full.partialPivLu().inverse();
    auto& elems = s == 0 ? bf_ : bg_;
    for (auto& x : elems) x = inv * x * full;
    auto& acc = s == 0 ? acc_f_ : acc_g_;
    acc = inv * acc;
  }

  bool is_scalar(const Matrix& c, Complex* value) const {
    const auto n = c.rows();
    *value = c.trace() / static_cast<double>(n);
    return (c - *value * Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-7;
  }

  std::optional<std::string> refine() {
    std::vector<Block> work = {{0, q_}};
    std::mt19937_64 rng(0x51d5);
    std::normal_distribution<double> nd(0, 1);
    while (!work.empty()) {
      const Block b = work.back();
      work.pop_back();
      bool trivial = true;
      for (std::size_t k = 0; k < bf_.size(); ++k) {
        Complex vf, vg;
        const bool sf = is_scalar(corner(bf_[k], b), &vf);
        const bool sg = is_scalar(corner(bg_[k], b), &vg);
        if (sf != sg || (sf && std::abs(vf - vg) > 1e-7)) {
          return "block at " + std::to_string(b.start) + " has corners that disagree between the two sides";
        }
        trivial = trivial && sf;
      }
      if (trivial) {
        blocks_.push_back(b);
        continue;
      }
      // A corresponding pair whose spectrum on the block is not a single point.
      Matrix cf, cg;
      std::vector<Cluster> cs;
      for (int attempt = 0; attempt < 16 && cs.size() < 2; ++attempt) {
        cf = Matrix::Zero(b.size, b.size);
        cg = Matrix::Zero(b.size, b.size);
        for (std::size_t k = 0; k < bf_.size(); ++k) {
          const Complex x(nd(rng), nd(rng));
          cf += x * corner(bf_[k], b);
          cg += x * corner(bg_[k], b);
        }
        cs = cluster(Eigen::ComplexEigenSolver<Matrix>(cf, false).eigenvalues(), opts_.cluster_tol);
      }
      if (cs.size() < 2) return "no element separates the block at " + std::to_string(b.start);
      if (!spectra_match(cs, Eigen::ComplexEigenSolver<Matrix>(cg, false).eigenvalues(), opts_.cluster_tol)) {
        return "corresponding elements have different spectra on the block at " + std::to_string(b.start);
      }
      const Complex lam = cs[0].center;
      const int m = cs[0].size;
      const Matrix id = Matrix::Identity(b.size, b.size);

      // Split off the generalized lambda-eigenspace on each side.
      std::vector<Matrix> moved(2);
      for (int s = 0; s < 2; ++s) {
        const Matrix& c = s == 0 ? cf : cg;
        Eigen::JacobiSVD<Matrix> svd(matrix_power(c - lam * id, m), Eigen::ComputeFullU | Eigen::ComputeFullV);
        Matrix sb(b.size, b.size);
        sb << svd.matrixV().rightCols(m), svd.matrixU().leftCols(b.size - m);
        change_basis(s, b, sb);
        moved[static_cast<std::size_t>(s)] = sb.partialPivLu().solve(c * sb);
      }

      // The projector onto the rest of the block as a polynomial without
      // constant term in M = (a - lambda)^m, applied to both sides alike.
      Matrix exact = Matrix::Zero(b.size, b.size);
      exact.bottomRightCorner(b.size - m, b.size - m).setIdentity();
      Complex c0 = 1;
      for (std::size_t j = 1; j < cs.size(); ++j) c0 *= std::pow(-std::pow(cs[j].center - lam, m), cs[j].size);
      for (int s = 0; s < 2; ++s) {
        const Matrix mm = matrix_power(moved[static_cast<std::size_t>(s)] - lam * id, m);
        Matrix p = id;
        for (std::size_t j = 1; j < cs.size(); ++j) {
          p = p * matrix_power(mm - std::pow(cs[j].center - lam, m) * id, cs[j].size);
        }
        const Matrix e = id - p / c0;
        const double err = (e - exact).cwiseAbs().maxCoeff();
        if (err > opts_.idempotent_tol) {
          std::ostringstream os;
          os << "block idempotent on side " << (s == 0 ? 'f' : 'g') << " misses the projector by " << err;
          return os.str();
        }
      }
      work.push_back({b.start + m, b.size - m});
      work.push_back({b.start, m});
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const Block& x, const Block& y) { return x.start < y.start; });
    return std::nullopt;
  }

  Matrix part(const Matrix& m, const Block& rows, const Block& cols) const {
    return m.block(rows.start, cols.start, rows.size, cols.size);
  }

  std::optional<std::string> align() {
    const std::size_t nb = blocks_.size();
    std::vector<bool> done(nb, false);
    std::size_t remaining = nb;
    while (remaining > 0) {
      // The unprocessed block most strongly linked to a processed one.
      double best = 0;
      std::size_t bk = nb, bp = nb, bw = 0;
      for (std::size_t k = 0; k < nb; ++k) {
        if (done[k]) continue;
        for (std::size_t p = 0; p < nb; ++p) {
          if (!done[p]) continue;
          for (std::size_t w = 0; w < bf_.size(); ++w) {
            const double n = part(bf_[w], blocks_[k], blocks_[p]).norm();
            if (n > best) {
              best = n;
              bk = k;
              bp = p;
              bw = w;
            }
          }
        }
      }
      if (best <= 1e-8) {
        // Start a new linked component; its first block needs no change.
        const auto first = static_cast<std::size_t>(std::find(done.begin(), done.end(), false) - done.begin());
        done[first] = true;
        --remaining;
        continue;
      }
      const Block& k = blocks_[bk];
      const Block& p = blocks_[bp];
      if (k.size != p.size) return "linked blocks have different sizes";
      // Minimum-norm dual element: F_kp * Fhat_pk = I on block k.
      const Matrix fkp = part(bf_[bw], k, p);
      const auto n2 = static_cast<Eigen::Index>(k.size) * k.size;
      Matrix sys(n2, static_cast<Eigen::Index>(bf_.size()));
      for (std::size_t u = 0; u < bf_.size(); ++u) {
        const Matrix prod = fkp * part(bf_[u], p, k);
        sys.col(static_cast<Eigen::Index>(u)) = Eigen::Map<const Vec>(prod.data(), n2);
      }
      const Matrix id = Matrix::Identity(k.size, k.size);
      const Vec rhs = Eigen::Map<const Vec>(id.data(), n2);
      const Vec x = sys.completeOrthogonalDecomposition().solve(rhs);
      const double res = (sys * x - rhs).norm();
      if (res > 1e-6) {
        std::ostringstream os;
        os << "no dual element for the block at " << k.start << " (residual " << res << ")";
        return os.str();
      }
      Matrix fhat = Matrix::Zero(p.size, k.size);
      for (std::size_t u = 0; u < bf_.size(); ++u) fhat += x(static_cast<Eigen::Index>(u)) * part(bf_[u], p, k);
      const Matrix tk = part(bg_[bw], k, p) * fhat;
      // change_basis conjugates by S^-1 X S, so pass S = T_k^-1.
      change_basis(0, k, tk.partialPivLu().inverse());
      done[bk] = true;
      --remaining;
    }
    double gap = 0;
    for (std::size_t w = 0; w < bf_.size(); ++w) gap = std::max(gap, (bf_[w] - bg_[w]).cwiseAbs().maxCoeff());
    if (gap > 1e-6) {
      std::ostringstream os;
      os << "aligned algebras still differ by " << gap;
      return os.str();
    }
    return std::nullopt;
  }

  const std::vector<Matrix>& fs_;
  const std::vector<Matrix>& gs_;
  RecoveryOptions opts_;
  int q_;
  std::vector<Matrix> bf_, bg_;
  Matrix acc_f_, acc_g_;
  std::vector<Block> blocks_;
};

}  // namespace

RecoveryReport recover_transform(const std::vector<Matrix>& fs, const std::vector<Matrix>& gs,
                                 const RecoveryOptions& opts) {
  return Recovery(fs, gs, opts).run();
}

}  // namespace holant
