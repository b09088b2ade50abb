#include "holant/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace holant {

std::string to_string(Shape s) {
  std::ostringstream os;
  os << "(" << s.left << "," << s.right << ")";
  return os.str();
}

std::size_t checked_power(int q, int n) {
  if (q < 1) throw HolantError("domain size must be positive");
  if (n < 0) throw HolantError("negative arity");
  std::size_t out = 1;
  for (int k = 0; k < n; ++k) {
    out *= static_cast<std::size_t>(q);
    if (out > kMaxTensorEntries) {
      throw HolantError("tensor with " + std::to_string(q) + "^" + std::to_string(n) +
                        " entries exceeds the 2^26 entry guard");
    }
  }
  return out;
}

MixedTensor::MixedTensor(int q, Shape shape, std::vector<Complex> entries)
    : q_(q), shape_(shape), entries_(std::move(entries)) {
  if (shape.left < 0 || shape.right < 0) throw HolantError("negative slot count");
  const std::size_t expected = checked_power(q, shape.arity());
  if (entries_.size() != expected) {
    throw HolantError("tensor of shape " + to_string(shape) + " on q=" + std::to_string(q) +
                      " needs " + std::to_string(expected) + " entries, got " +
                      std::to_string(entries_.size()));
  }
}

MixedTensor MixedTensor::zeros(int q, Shape shape) {
  return MixedTensor(q, shape, std::vector<Complex>(checked_power(q, shape.arity())));
}

MixedTensor MixedTensor::scalar(Complex value, int q) { return MixedTensor(q, {0, 0}, {value}); }

MixedTensor MixedTensor::matrix(int q, std::vector<Complex> row_major) {
  return MixedTensor(q, {1, 1}, std::move(row_major));
}

std::size_t MixedTensor::flat_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != arity()) throw HolantError("index tuple has wrong length");
  std::size_t flat = 0;
  for (int x : index) {
    if (x < 0 || x >= q_) throw HolantError("index out of domain");
    flat = flat * static_cast<std::size_t>(q_) + static_cast<std::size_t>(x);
  }
  return flat;
}

std::vector<int> MixedTensor::unflatten(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(arity()));
  for (int k = arity() - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(q_));
    flat /= static_cast<std::size_t>(q_);
  }
  return idx;
}

Complex MixedTensor::at(std::span<const int> index) const { return entries_[flat_index(index)]; }

Complex MixedTensor::at(std::initializer_list<int> index) const {
  return at(std::span<const int>(index.begin(), index.size()));
}

Complex MixedTensor::as_scalar() const {
  if (!is_scalar()) throw HolantError("tensor of shape " + to_string(shape_) + " is not a scalar");
  return entries_[0];
}

double MixedTensor::norm() const {
  double s = 0;
  for (const auto& e : entries_) s += std::norm(e);
  return std::sqrt(s);
}

double MixedTensor::max_abs() const {
  double m = 0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

bool MixedTensor::approx_equal(const MixedTensor& other, double tol) const {
  if (q_ != other.q_ || shape_ != other.shape_) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (std::abs(entries_[k] - other.entries_[k]) > tol) return false;
  }
  return true;
}

MixedTensor MixedTensor::reshaped(Shape shape) const {
  if (shape.arity() != arity()) throw HolantError("reshape must preserve arity");
  return MixedTensor(q_, shape, entries_);
}

MixedTensor SymBoolSignature::expand() const {
  const int n = shape.arity();
  if (static_cast<int>(values.size()) != n + 1) {
    throw HolantError("symmetric Boolean signature of arity " + std::to_string(n) + " needs " +
                      std::to_string(n + 1) + " values");
  }
  const std::size_t count = checked_power(2, n);
  std::vector<Complex> entries(count);
  for (std::size_t k = 0; k < count; ++k) {
    entries[k] = values[static_cast<std::size_t>(std::popcount(k))];
  }
  return MixedTensor(2, shape, std::move(entries));
}

SubdomainMask::SubdomainMask(int q, std::vector<int> members) : q_(q), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw HolantError("subdomain members must be distinct");
  }
  for (int x : members_) {
    if (x < 0 || x >= q_) throw HolantError("subdomain member out of range");
  }
}

SubdomainMask SubdomainMask::prefix(int q, int count) {
  std::vector<int> m(static_cast<std::size_t>(count));
  std::iota(m.begin(), m.end(), 0);
  return SubdomainMask(q, std::move(m));
}

bool SubdomainMask::contains(int x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

MixedTensor equality_signature(int q, int n, Shape shape) {
  if (n < 1) throw HolantError("equality signature needs arity >= 1");
  if (shape.arity() != n) throw HolantError("shape does not match equality arity");
  auto t = std::vector<Complex>(checked_power(q, n));
  // Diagonal entries sit at x * (1 + q + ... + q^{n-1}).
  std::size_t stride = 0;
  for (int k = 0; k < n; ++k) stride = stride * static_cast<std::size_t>(q) + 1;
  for (int x = 0; x < q; ++x) t[static_cast<std::size_t>(x) * stride] = 1.0;
  return MixedTensor(q, shape, std::move(t));
}

MixedTensor disequality_signature(int q, Shape shape) {
  if (shape.arity() != 2) throw HolantError("disequality is binary");
  std::vector<Complex> t(static_cast<std::size_t>(q * q), 1.0);
  for (int x = 0; x < q; ++x) t[static_cast<std::size_t>(x * q + x)] = 0.0;
  return MixedTensor(q, shape, std::move(t));
}

namespace {

void require_same_domain(const MixedTensor& a, const MixedTensor& b) {
  if (a.q() != b.q()) {
    throw HolantError("domain mismatch: q=" + std::to_string(a.q()) + " vs q=" + std::to_string(b.q()));
  }
}

}  // namespace

MixedTensor tensor_product(const MixedTensor& a, const MixedTensor& b) {
  require_same_domain(a, b);
  const int q = a.q();
  const std::size_t al = checked_power(q, a.left()), ar = checked_power(q, a.right());
  const std::size_t bl = checked_power(q, b.left()), br = checked_power(q, b.right());
  const Shape out_shape{a.left() + b.left(), a.right() + b.right()};
  std::vector<Complex> out(checked_power(q, out_shape.arity()));
  // Output index order: (a_left, b_left, a_right, b_right).
  for (std::size_t i = 0; i < al; ++i) {
    for (std::size_t j = 0; j < bl; ++j) {
      for (std::size_t k = 0; k < ar; ++k) {
        const Complex av = a[i * ar + k];
        if (av == Complex{}) continue;
        const std::size_t base = ((i * bl + j) * ar + k) * br;
        for (std::size_t l = 0; l < br; ++l) out[base + l] = av * b[j * br + l];
      }
    }
  }
  return MixedTensor(q, out_shape, std::move(out));
}

MixedTensor contract(const MixedTensor& t, int i, int j) {
  if (i < 1 || i > t.left() || j < 1 || j > t.right()) {
    throw HolantError("contraction slot out of range: left " + std::to_string(i) + ", right " +
                      std::to_string(j) + " on shape " + to_string(t.shape()));
  }
  const int q = t.q();
  const int n = t.arity();
  const int li = i - 1;
  const int rj = t.left() + j - 1;
  const Shape out_shape{t.left() - 1, t.right() - 1};
  const std::size_t out_size = checked_power(q, out_shape.arity());
  std::vector<Complex> out(out_size);
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  {
    std::size_t s = 1;
    for (int k = n - 1; k >= 0; --k) {
      stride[static_cast<std::size_t>(k)] = s;
      s *= static_cast<std::size_t>(q);
    }
  }
  const std::size_t diag_stride = stride[static_cast<std::size_t>(li)] + stride[static_cast<std::size_t>(rj)];
  std::vector<int> idx(static_cast<std::size_t>(out_shape.arity()), 0);
  for (std::size_t o = 0; o < out_size; ++o) {
    std::size_t base = 0;
    for (int k = 0, m = 0; k < n; ++k) {
      if (k == li || k == rj) continue;
      base += static_cast<std::size_t>(idx[static_cast<std::size_t>(m++)]) * stride[static_cast<std::size_t>(k)];
    }
    Complex s{};
    for (int x = 0; x < q; ++x) s += t[base + static_cast<std::size_t>(x) * diag_stride];
    out[o] = s;
    for (int k = out_shape.arity() - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < q) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return MixedTensor(q, out_shape, std::move(out));
}

Complex pair(const MixedTensor& k, const MixedTensor& k2) {
  require_same_domain(k, k2);
  if (k2.shape() != k.shape().transposed()) {
    throw HolantError("pairing needs transposed shapes, got " + to_string(k.shape()) + " and " +
                      to_string(k2.shape()));
  }
  const std::size_t nl = checked_power(k.q(), k.left());
  const std::size_t nr = checked_power(k.q(), k.right());
  Complex s{};
  for (std::size_t a = 0; a < nl; ++a) {
    for (std::size_t b = 0; b < nr; ++b) s += k[a * nr + b] * k2[b * nl + a];
  }
  return s;
}

MixedTensor restrict_to(const MixedTensor& t, const SubdomainMask& x) {
  if (x.q() != t.q()) throw HolantError("subdomain mask is over a different domain");
  if (x.empty()) throw HolantError("cannot restrict to an empty subdomain");
  const int nx = x.size();
  const int n = t.arity();
  const std::size_t out_size = checked_power(nx, n);
  std::vector<Complex> out(out_size);
  std::vector<int> sub(static_cast<std::size_t>(n), 0);
  std::vector<int> full(static_cast<std::size_t>(n));
  const auto members = x.members();
  for (std::size_t o = 0; o < out_size; ++o) {
    for (int k = 0; k < n; ++k) full[static_cast<std::size_t>(k)] = members[static_cast<std::size_t>(sub[static_cast<std::size_t>(k)])];
    out[o] = t.at(full);
    for (int k = n - 1; k >= 0; --k) {
      if (++sub[static_cast<std::size_t>(k)] < nx) break;
      sub[static_cast<std::size_t>(k)] = 0;
    }
  }
  return MixedTensor(nx, t.shape(), std::move(out));
}

MixedTensor embed_uparrow(const MixedTensor& t, int z, std::optional<std::vector<int>> injection) {
  const int nx = t.q();
  if (nx > z) throw HolantError("cannot embed a domain of size " + std::to_string(nx) + " into " + std::to_string(z));
  std::vector<int> inj;
  if (injection) {
    inj = *injection;
    if (static_cast<int>(inj.size()) != nx) throw HolantError("injection has wrong length");
    std::vector<int> sorted = inj;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw HolantError("embedding map is not injective");
    }
    for (int v : inj) {
      if (v < 0 || v >= z) throw HolantError("embedding target out of range");
    }
  } else {
    inj.resize(static_cast<std::size_t>(nx));
    std::iota(inj.begin(), inj.end(), 0);
  }
  const int n = t.arity();
  auto out = MixedTensor::zeros(z, t.shape());
  std::vector<Complex> e(out.entries().begin(), out.entries().end());
  std::vector<int> full(static_cast<std::size_t>(n));
  for (std::size_t f = 0; f < t.size(); ++f) {
    const auto idx = t.unflatten(f);
    std::size_t flat = 0;
    for (int k = 0; k < n; ++k) flat = flat * static_cast<std::size_t>(z) + static_cast<std::size_t>(inj[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])]);
    e[flat] = t[f];
  }
  return MixedTensor(z, t.shape(), std::move(e));
}

MixedTensor direct_sum(const MixedTensor& f, const MixedTensor& g) {
  if (f.shape() != g.shape()) {
    throw HolantError("direct sum needs equal shapes, got " + to_string(f.shape()) + " and " +
                      to_string(g.shape()));
  }
  const int z = f.q() + g.q();
  const auto a = embed_uparrow(f, z);
  std::vector<int> shift(static_cast<std::size_t>(g.q()));
  std::iota(shift.begin(), shift.end(), f.q());
  const auto b = embed_uparrow(g, z, shift);
  return added(a, b);
}

MixedTensor dagger(const MixedTensor& t) {
  const std::size_t nl = checked_power(t.q(), t.left());
  const std::size_t nr = checked_power(t.q(), t.right());
  std::vector<Complex> out(t.size());
  for (std::size_t a = 0; a < nl; ++a) {
    for (std::size_t b = 0; b < nr; ++b) out[b * nl + a] = std::conj(t[a * nr + b]);
  }
  return MixedTensor(t.q(), t.shape().transposed(), std::move(out));
}

MixedTensor conjugate(const MixedTensor& t) {
  std::vector<Complex> out(t.entries().begin(), t.entries().end());
  for (auto& e : out) e = std::conj(e);
  return MixedTensor(t.q(), t.shape(), std::move(out));
}

MixedTensor scaled(const MixedTensor& t, Complex c) {
  std::vector<Complex> out(t.entries().begin(), t.entries().end());
  for (auto& e : out) e *= c;
  return MixedTensor(t.q(), t.shape(), std::move(out));
}

MixedTensor added(const MixedTensor& a, const MixedTensor& b) {
  require_same_domain(a, b);
  if (a.shape() != b.shape()) throw HolantError("cannot add tensors of different shapes");
  std::vector<Complex> out(a.entries().begin(), a.entries().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
  return MixedTensor(a.q(), a.shape(), std::move(out));
}

MixedTensor permute_slots(const MixedTensor& t, std::span<const int> perm, Shape shape) {
  const int n = t.arity();
  if (static_cast<int>(perm.size()) != n || shape.arity() != n) throw HolantError("bad slot permutation");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]++) throw HolantError("bad slot permutation");
  }
  std::vector<Complex> out(t.size());
  std::vector<int> src(static_cast<std::size_t>(n));
  for (std::size_t o = 0; o < out.size(); ++o) {
    std::size_t rem = o;
    for (int k = n - 1; k >= 0; --k) {
      src[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = static_cast<int>(rem % static_cast<std::size_t>(t.q()));
      rem /= static_cast<std::size_t>(t.q());
    }
    out[o] = t.at(src);
  }
  return MixedTensor(t.q(), shape, std::move(out));
}

}  // namespace holant
