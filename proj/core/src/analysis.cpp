#include "kout/analysis.hpp"

#include <algorithm>
#include <unordered_map>

namespace kout {

ComponentCensus census(const KOutGraph& graph) {
  const std::uint32_t n = graph.n;
  DisjointSet dsu(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (const std::uint32_t u : graph.selected_by(v)) dsu.merge(v, u);
  }

  std::unordered_map<std::uint32_t, std::int64_t> size_by_root;
  size_by_root.reserve(16);
  for (std::uint32_t v = 0; v < n; ++v) ++size_by_root[dsu.find(v)];

  ComponentCensus out;
  out.num_components = static_cast<std::int64_t>(size_by_root.size());
  out.connected = out.num_components == 1;
  out.component_sizes.reserve(size_by_root.size());
  for (const auto& [root, size] : size_by_root) out.component_sizes.push_back(size);
  std::sort(out.component_sizes.begin(), out.component_sizes.end(),
            std::greater<std::int64_t>());

  // A size-2 component is necessarily a mutual pair; it counts toward Y
  // exactly when both members are class-1.
  for (std::uint32_t v = 0; v < n; ++v) {
    if (dsu.component_size(v) != 2 || graph.classes[v] != 0) continue;
    const std::uint32_t root = dsu.find(v);
    if (v != root) continue;  // visit each pair once, via its root
    std::uint32_t other = n;
    for (const std::uint32_t u : graph.neighbors(v)) {
      other = u;
      break;
    }
    if (other < n && graph.classes[other] == 0) ++out.y_count;
  }
  return out;
}

std::int64_t count_isolated_pairs(const KOutGraph& graph) {
  const std::uint32_t n = graph.n;
  // selectors[u] = number of nodes whose selection set contains u.
  std::vector<std::uint32_t> selectors(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (const std::uint32_t u : graph.selected_by(v)) ++selectors[u];
  }

  std::int64_t count = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto sel_i = graph.selected_by(i);
    if (graph.classes[i] != 0 || sel_i.size() != 1) continue;
    const std::uint32_t j = sel_i[0];
    if (j <= i) continue;  // count each unordered pair once
    const auto sel_j = graph.selected_by(j);
    if (graph.classes[j] != 0 || sel_j.size() != 1 || sel_j[0] != i) continue;
    // Mutual selection accounts for exactly one selector on each side; any
    // additional selector is a third node pointing into the pair.
    if (selectors[i] == 1 && selectors[j] == 1) ++count;
  }
  return count;
}

}  // namespace kout
