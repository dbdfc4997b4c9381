#pragma once

#include <cstdint>
#include <vector>

#include "kout/sampler.hpp"

namespace kout {

/// Disjoint-set union with union-by-size and path compression.
class DisjointSet {
 public:
  explicit DisjointSet(std::uint32_t n) : parent_(n), size_(n, 1) {
    for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/// Connectivity and component statistics of one realization.
struct ComponentCensus {
  bool connected = false;
  std::int64_t num_components = 0;
  std::vector<std::int64_t> component_sizes;  // sorted descending, sums to n
  std::int64_t y_count = 0;                   // isolated mutual class-1 pairs
};

/// Exact connected components via disjoint-set union over the adjacency.
/// y_count is derived from the component structure: size-2 components whose
/// members are both class-1.
ComponentCensus census(const KOutGraph& graph);

/// Counts pairs {i,j} where both nodes are class-1, each selected exactly the
/// other, and no third node selected either of them. Independent of census's
/// component-based route; the two must agree on every graph.
std::int64_t count_isolated_pairs(const KOutGraph& graph);

}  // namespace kout
