#pragma once

// Dense labelled tensor networks over a common domain size, evaluated either
// by exhaustive label assignment or by greedy pairwise contraction.

#include <cstddef>
#include <deque>
#include <vector>

#include "holant/tensor.hpp"

namespace holant {

struct TensorNode {
  const MixedTensor* tensor = nullptr;
  /// One label per slot, in slot order. A label shared by two slots (on one
  /// node or two) is summed over; a label used once is an open index.
  std::vector<int> labels;
};

struct TensorNetwork {
  int q = 2;
  std::vector<TensorNode> nodes;
  /// Output index order. Every open label must appear here exactly once.
  std::vector<int> open;
  Complex scale{1.0, 0.0};
  /// Storage for tensors created while building the network (wires etc.).
  std::deque<MixedTensor> owned;

  const MixedTensor* own(MixedTensor t) {
    owned.push_back(std::move(t));
    return &owned.back();
  }
};

struct ContractOptions {
  std::size_t max_intermediate = kMaxTensorEntries;
};

struct ContractStats {
  std::size_t pairwise_steps = 0;
  std::size_t largest_intermediate = 0;
};

/// Greedy minimum-result-size pairwise contraction. Returns the dense output
/// over `open` (row-major, first open label most significant).
std::vector<Complex> contract_network(const TensorNetwork& net, const ContractOptions& opts = {},
                                      ContractStats* stats = nullptr);

/// Sum over all assignments of internal labels, skipping branches whose
/// partial product is already zero.
std::vector<Complex> brute_force_network(const TensorNetwork& net);

}  // namespace holant
