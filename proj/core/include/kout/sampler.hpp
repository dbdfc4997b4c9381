#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kout/model.hpp"
#include "kout/rng.hpp"

namespace kout {

/// Ragged per-node node-id lists in CSR layout (offsets has n+1 entries).
struct NodeLists {
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint32_t> flat;

  std::span<const std::uint32_t> row(std::uint32_t v) const noexcept {
    return {flat.data() + offsets[v], flat.data() + offsets[v + 1]};
  }
};

/// One sampled realization: class labels, selection sets, and the induced
/// undirected simple graph. Selections are sorted ascending per node; the
/// adjacency merges mutual selections into a single deduplicated edge.
struct KOutGraph {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> classes;  // 0-based class index per node
  NodeLists selections;                // Gamma_v, |row(v)| = K_{class of v}
  NodeLists adjacency;                 // symmetric, loop-free, sorted rows

  std::span<const std::uint32_t> selected_by(std::uint32_t v) const noexcept {
    return selections.row(v);
  }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return adjacency.row(v);
  }
  std::uint64_t degree(std::uint32_t v) const noexcept {
    return adjacency.offsets[v + 1] - adjacency.offsets[v];
  }
  std::uint64_t edge_count() const noexcept { return adjacency.flat.size() / 2; }
};

/// Assigns each node a class independently with probability mu_i.
std::vector<std::uint32_t> sample_classes(const ModelParams& params, SeedSpec seed);

/// For each node v, a uniformly random K_{t_v}-subset of the other nodes,
/// mutually independent across nodes, stored sorted ascending.
NodeLists sample_selections(const ModelParams& params,
                            const std::vector<std::uint32_t>& classes, SeedSpec seed);

/// Composes class assignment and selection sampling, then materializes the
/// symmetric adjacency. Bit-identical across runs, platforms, and worker
/// counts for a fixed seed.
KOutGraph build_graph(const ModelParams& params, SeedSpec seed);

/// Debug dump: header "# kout v1 n=<n>", then one line per node,
/// "node_id<TAB>class<TAB>comma-separated selections" with 1-based classes.
void write_dump(std::ostream& out, const KOutGraph& graph);

}  // namespace kout
