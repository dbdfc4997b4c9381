#include "kout/sampler.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

namespace kout {

namespace {

// Above this many selections the linear duplicate scan loses to a hash set.
constexpr std::int64_t kScanLimit = 16;

// Draw a uniform element of {0,...,n-1} \ {v}.
inline std::uint32_t draw_other(Splitmix64& rng, std::uint32_t n, std::uint32_t v) {
  const auto x = static_cast<std::uint32_t>(rng.uniform_below(n - 1));
  return x >= v ? x + 1 : x;
}

// Uniform k-subset of {0,...,n-1} \ {v} by rejection; exact because each new
// element is uniform over the remaining candidates.
void sample_subset_rejection(Splitmix64& rng, std::uint32_t n, std::uint32_t v,
                             std::int64_t k, std::vector<std::uint32_t>& out,
                             std::unordered_set<std::uint32_t>& scratch) {
  out.clear();
  if (k <= kScanLimit) {
    while (static_cast<std::int64_t>(out.size()) < k) {
      const std::uint32_t c = draw_other(rng, n, v);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  } else {
    scratch.clear();
    while (static_cast<std::int64_t>(scratch.size()) < k) {
      scratch.insert(draw_other(rng, n, v));
    }
    out.assign(scratch.begin(), scratch.end());
  }
  std::sort(out.begin(), out.end());
}

// Uniform k-subset via a partial Fisher-Yates shuffle over all candidates;
// used when k is a large fraction of n so rejection would thrash.
void sample_subset_shuffle(Splitmix64& rng, std::uint32_t n, std::uint32_t v,
                           std::int64_t k, std::vector<std::uint32_t>& out,
                           std::vector<std::uint32_t>& pool) {
  pool.resize(n - 1);
  std::uint32_t w = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    if (u != v) pool[w++] = u;
  }
  for (std::int64_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::int64_t>(rng.uniform_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  out.assign(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
}

}  // namespace

std::vector<std::uint32_t> sample_classes(const ModelParams& params, SeedSpec seed) {
  const auto n = static_cast<std::uint32_t>(params.n);
  const std::size_t r = params.r();
  std::vector<std::uint32_t> classes(n, 0);
  if (r == 1) return classes;

  Splitmix64 rng = trial_stream(seed, StreamDomain::classes);
  for (std::uint32_t v = 0; v < n; ++v) {
    const double u = rng.next_double();
    double cum = 0.0;
    std::uint32_t c = static_cast<std::uint32_t>(r) - 1;  // last class absorbs rounding
    for (std::size_t i = 0; i + 1 < r; ++i) {
      cum += params.dist.probs[i];
      if (u < cum) {
        c = static_cast<std::uint32_t>(i);
        break;
      }
    }
    classes[v] = c;
  }
  return classes;
}

NodeLists sample_selections(const ModelParams& params,
                            const std::vector<std::uint32_t>& classes, SeedSpec seed) {
  const auto n = static_cast<std::uint32_t>(params.n);
  Splitmix64 rng = trial_stream(seed, StreamDomain::selections);

  NodeLists sel;
  sel.offsets.resize(n + 1);
  sel.offsets[0] = 0;
  std::uint64_t total = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    total += static_cast<std::uint64_t>(params.scaling.ks[classes[v]]);
    sel.offsets[v + 1] = total;
  }
  sel.flat.resize(total);

  std::vector<std::uint32_t> subset;
  std::vector<std::uint32_t> pool;
  std::unordered_set<std::uint32_t> scratch;
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::int64_t k = params.scaling.ks[classes[v]];
    // Crossover at K/(n-1) = 1/8 between the two exact schemes.
    if (8 * k < static_cast<std::int64_t>(n) - 1) {
      sample_subset_rejection(rng, n, v, k, subset, scratch);
    } else {
      sample_subset_shuffle(rng, n, v, k, subset, pool);
    }
    std::copy(subset.begin(), subset.end(), sel.flat.begin() + sel.offsets[v]);
  }
  return sel;
}

KOutGraph build_graph(const ModelParams& params, SeedSpec seed) {
  KOutGraph g;
  g.n = static_cast<std::uint32_t>(params.n);
  g.classes = sample_classes(params, seed);
  g.selections = sample_selections(params, g.classes, seed);

  // Symmetrize: each selection contributes both directions, then rows are
  // sorted and deduplicated (mutual selections merge into one edge).
  std::vector<std::uint64_t> deg(g.n, 0);
  for (std::uint32_t v = 0; v < g.n; ++v) {
    for (const std::uint32_t u : g.selections.row(v)) {
      ++deg[v];
      ++deg[u];
    }
  }
  NodeLists adj;
  adj.offsets.resize(g.n + 1);
  adj.offsets[0] = 0;
  for (std::uint32_t v = 0; v < g.n; ++v) adj.offsets[v + 1] = adj.offsets[v] + deg[v];
  adj.flat.resize(adj.offsets[g.n]);

  std::vector<std::uint64_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (std::uint32_t v = 0; v < g.n; ++v) {
    for (const std::uint32_t u : g.selections.row(v)) {
      adj.flat[cursor[v]++] = u;
      adj.flat[cursor[u]++] = v;
    }
  }

  std::uint64_t write = 0;
  std::uint64_t row_begin = 0;
  for (std::uint32_t v = 0; v < g.n; ++v) {
    const std::uint64_t row_end = adj.offsets[v + 1];
    std::sort(adj.flat.begin() + static_cast<std::ptrdiff_t>(row_begin),
              adj.flat.begin() + static_cast<std::ptrdiff_t>(row_end));
    const std::uint64_t new_begin = write;
    for (std::uint64_t i = row_begin; i < row_end; ++i) {
      if (write == new_begin || adj.flat[write - 1] != adj.flat[i]) {
        adj.flat[write++] = adj.flat[i];
      }
    }
    row_begin = row_end;
    adj.offsets[v] = new_begin;
    adj.offsets[v + 1] = write;
  }
  adj.flat.resize(write);
  g.adjacency = std::move(adj);
  return g;
}

void write_dump(std::ostream& out, const KOutGraph& graph) {
  out << "# kout v1 n=" << graph.n << '\n';
  for (std::uint32_t v = 0; v < graph.n; ++v) {
    out << v << '\t' << graph.classes[v] + 1 << '\t';
    const auto row = graph.selected_by(v);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

}  // namespace kout
