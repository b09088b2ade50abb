#pragma once

// Bounded enumeration of Bi-Holant grids and gadgets up to isomorphism.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "holant/grid.hpp"

namespace holant {

struct SigSlot {
  std::string name;
  Shape shape;
};

/// Collects (name, shape) pairs from a signature set in its own order.
std::vector<SigSlot> slots_of(const SignatureSet& sigs);

struct EnumerateOptions {
  /// Abort with an error once this many distinct grids have been produced.
  std::size_t max_results = 5'000'000;
};

/// Return false to stop the enumeration early.
using GridVisitor = std::function<bool(const SignatureGrid&)>;

/// Every closed grid with at most `max_vertices` vertices, once per
/// isomorphism class (port order respected), each with 0 and then 1 loops.
/// Order: by vertex count, then by signature multiplicities, then search order.
/// Returns the number of grids visited.
std::size_t enumerate_grids(int q, const std::vector<SigSlot>& sigs, int max_vertices, const GridVisitor& visit,
                            const EnumerateOptions& opts = {});
std::vector<SignatureGrid> enumerate_grids(int q, const std::vector<SigSlot>& sigs, int max_vertices,
                                           const EnumerateOptions& opts = {});

/// Every gadget with the given dangling profile and at most `max_vertices`
/// vertices (wires come free), without components lacking dangling ends.
/// Dangling ends are labelled, so isomorphisms fix them. Profile (0,0)
/// falls back to closed grids without loops.
std::size_t enumerate_gadgets(int q, const std::vector<SigSlot>& sigs, Shape profile, int max_vertices,
                              const GridVisitor& visit, const EnumerateOptions& opts = {});
std::vector<SignatureGrid> enumerate_gadgets(int q, const std::vector<SigSlot>& sigs, Shape profile,
                                             int max_vertices, const EnumerateOptions& opts = {});

}  // namespace holant
