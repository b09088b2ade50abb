#pragma once

// Holant values as polynomials in the entries of the signatures.

#include <map>
#include <string>
#include <vector>

#include "holant/grid.hpp"

namespace holant {

/// One signature entry used as an indeterminate.
struct Variable {
  std::string sig;
  std::vector<int> index;
  auto operator<=>(const Variable&) const = default;
};

/// Sorted multiset of variables.
using Monomial = std::vector<Variable>;

class HolantPolynomial {
 public:
  static constexpr std::size_t kMaxMonomials = 1'000'000;

  explicit HolantPolynomial(int q = 2) : q_(q) {}

  int q() const { return q_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Adds c times the monomial (any variable order).
  void add(Monomial m, Complex c);
  Complex coefficient(Monomial m) const;

  Complex evaluate(const SignatureSet& sigs) const;

  /// Renders e.g. "x00*y0^2 + x01*y0*y1"; `symbols` maps signature names to
  /// printed letters (default: the name itself).
  std::string to_string(const std::map<std::string, std::string>& symbols = {}) const;

 private:
  int q_;
  std::map<Monomial, Complex> terms_;
};

/// Expands the Holant sum of a closed grid symbolically, one monomial per
/// edge assignment, merged.
HolantPolynomial holant_polynomial(const SignatureGrid& g);

}  // namespace holant
