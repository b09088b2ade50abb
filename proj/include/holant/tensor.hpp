#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace holant {

using Complex = std::complex<double>;

/// Default absolute tolerance for entrywise tensor comparisons.
inline constexpr double kDefaultTol = 1e-9;

/// Hard cap on the number of dense entries a tensor may hold.
inline constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 26;

/// Base class for every error raised by the library.
class HolantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (left, right) = (contravariant, covariant) slot counts.
struct Shape {
  int left = 0;
  int right = 0;

  int arity() const { return left + right; }
  Shape transposed() const { return {right, left}; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(Shape s);

/// Dense mixed tensor over C^q. Entries are stored row-major with the
/// left slots most significant, then the right slots.
class MixedTensor {
 public:
  MixedTensor(int q, Shape shape, std::vector<Complex> entries);

  static MixedTensor zeros(int q, Shape shape);
  static MixedTensor scalar(Complex value, int q = 1);
  /// (1,1) tensor from a row-major q*q matrix.
  static MixedTensor matrix(int q, std::vector<Complex> row_major);

  int q() const { return q_; }
  Shape shape() const { return shape_; }
  int left() const { return shape_.left; }
  int right() const { return shape_.right; }
  int arity() const { return shape_.arity(); }
  std::size_t size() const { return entries_.size(); }
  bool is_scalar() const { return arity() == 0; }

  std::span<const Complex> entries() const { return entries_; }
  Complex operator[](std::size_t flat) const { return entries_[flat]; }
  /// Entry at an index tuple given as (left indices..., right indices...).
  Complex at(std::span<const int> index) const;
  Complex at(std::initializer_list<int> index) const;

  std::size_t flat_index(std::span<const int> index) const;
  std::vector<int> unflatten(std::size_t flat) const;

  Complex as_scalar() const;

  /// Euclidean norm of the entry vector.
  double norm() const;
  double max_abs() const;

  bool approx_equal(const MixedTensor& other, double tol = kDefaultTol) const;

  /// Same entries viewed with a different (left, right) split of one arity.
  MixedTensor reshaped(Shape shape) const;

 private:
  int q_;
  Shape shape_;
  std::vector<Complex> entries_;
};

/// Number of entries q^n, throwing when the guard is exceeded.
std::size_t checked_power(int q, int n);

/// Symmetric Boolean signature [f_0, ..., f_n] indexed by Hamming weight.
struct SymBoolSignature {
  std::vector<Complex> values;
  Shape shape;

  MixedTensor expand() const;
};

/// Sorted subset X of [q].
class SubdomainMask {
 public:
  SubdomainMask(int q, std::vector<int> members);
  static SubdomainMask prefix(int q, int count);

  int q() const { return q_; }
  std::span<const int> members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int x) const;

 private:
  int q_;
  std::vector<int> members_;
};

MixedTensor equality_signature(int q, int n, Shape shape);
/// Disequality on q = 2 only makes sense as a binary signature; generalized
/// here to "all inputs pairwise distinct" for arity 2.
MixedTensor disequality_signature(int q, Shape shape);

MixedTensor tensor_product(const MixedTensor& a, const MixedTensor& b);

/// Contracts left slot i with right slot j (1-based). Remaining slots keep
/// their relative order.
MixedTensor contract(const MixedTensor& t, int i, int j);

/// Full contraction <k, k2> pairing k's left slots with k2's right slots and
/// k's right slots with k2's left slots, in order.
Complex pair(const MixedTensor& k, const MixedTensor& k2);

MixedTensor restrict_to(const MixedTensor& t, const SubdomainMask& x);

/// Pads t (on domain |X|) with zeros to domain z. `injection[i]` is the image
/// of domain element i; defaults to the prefix placement i -> i.
MixedTensor embed_uparrow(const MixedTensor& t, int z,
                          std::optional<std::vector<int>> injection = std::nullopt);

MixedTensor direct_sum(const MixedTensor& f, const MixedTensor& g);

/// Entrywise conjugate with left and right roles swapped.
MixedTensor dagger(const MixedTensor& t);
MixedTensor conjugate(const MixedTensor& t);

MixedTensor scaled(const MixedTensor& t, Complex c);
MixedTensor added(const MixedTensor& a, const MixedTensor& b);

/// Permutes slots: result slot k takes source slot perm[k] (0-based over all
/// left+right slots). The result keeps `shape`.
MixedTensor permute_slots(const MixedTensor& t, std::span<const int> perm, Shape shape);

}  // namespace holant
