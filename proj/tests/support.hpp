#pragma once

#include <complex>
#include <random>
#include <vector>

#include <algorithm>
#include <string>

#include "holant/grid.hpp"

namespace testing_support {

using holant::Complex;
using holant::MixedTensor;
using holant::Shape;

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline MixedTensor random_tensor(std::mt19937_64& rng, int q, Shape s) {
  std::vector<Complex> e(holant::checked_power(q, s.arity()));
  for (auto& x : e) x = random_complex(rng);
  return MixedTensor(q, s, std::move(e));
}

inline MixedTensor random_real_tensor(std::mt19937_64& rng, int q, Shape s) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> e(holant::checked_power(q, s.arity()));
  for (auto& x : e) x = n(rng);
  return MixedTensor(q, s, std::move(e));
}

inline MixedTensor mat2(Complex a, Complex b, Complex c, Complex d) { return MixedTensor::matrix(2, {a, b, c, d}); }

struct RandomGrid {
  holant::SignatureGrid grid;
  holant::SignatureSet sigs;
};

// Random closed grid where every vertex has its own random signature.
inline RandomGrid random_closed_grid(std::mt19937_64& rng, int q, int n) {
  std::uniform_int_distribution<int> ar(0, 3);
  while (true) {
    std::vector<Shape> shapes;
    int diff = 0;
    for (int v = 0; v + 1 < n; ++v) {
      const int a = ar(rng);
      std::uniform_int_distribution<int> split(0, a);
      const int l = split(rng);
      shapes.push_back({l, a - l});
      diff += l - (a - l);
    }
    if (std::abs(diff) > 3) continue;
    shapes.push_back(diff >= 0 ? Shape{0, diff} : Shape{-diff, 0});
    RandomGrid rg;
    rg.grid.q = q;
    std::vector<holant::PortRef> ls, rs;
    for (int v = 0; v < n; ++v) {
      const std::string name = "s" + std::to_string(v);
      rg.sigs.add(name, random_tensor(rng, q, shapes[static_cast<std::size_t>(v)]));
      rg.grid.add_vertex(name, shapes[static_cast<std::size_t>(v)]);
      for (int i = 1; i <= shapes[static_cast<std::size_t>(v)].left; ++i) ls.push_back({v, i});
      for (int j = 1; j <= shapes[static_cast<std::size_t>(v)].right; ++j)
        rs.push_back({v, shapes[static_cast<std::size_t>(v)].left + j});
    }
    std::shuffle(rs.begin(), rs.end(), rng);
    for (std::size_t k = 0; k < ls.size(); ++k) rg.grid.edges.push_back({ls[k], rs[k]});
    return rg;
  }
}

}  // namespace testing_support
