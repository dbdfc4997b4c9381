#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "kout/analysis.hpp"
#include "kout/sampler.hpp"
#include "kout/theory.hpp"

using kout::KOutGraph;
using kout::ModelParams;
using kout::SeedSpec;

namespace {

ModelParams make(std::int64_t n, std::vector<double> mu, std::vector<std::int64_t> k) {
  ModelParams p;
  p.n = n;
  p.dist.probs = std::move(mu);
  p.scaling.ks = std::move(k);
  kout::validate(p);
  return p;
}

ModelParams figure_params(std::int64_t n) { return make(n, {0.9, 0.06, 0.04}, {1, 2, 3}); }

}  // namespace

TEST_CASE("n=2, K=1 forces the mutual pair") {
  const ModelParams p = make(2, {1.0}, {1});
  for (std::uint64_t t = 0; t < 50; ++t) {
    const KOutGraph g = kout::build_graph(p, {9, t});
    CHECK(g.selected_by(0).size() == 1);
    CHECK(g.selected_by(0)[0] == 1);
    CHECK(g.selected_by(1)[0] == 0);
    CHECK(g.edge_count() == 1);
  }
}

TEST_CASE("single class assigns everything to class 1 for any seed") {
  const ModelParams p = make(50, {1.0}, {2});
  for (std::uint64_t t = 0; t < 10; ++t) {
    for (const std::uint32_t c : kout::sample_classes(p, {t, t})) CHECK(c == 0);
  }
}

TEST_CASE("class sampling is deterministic and matches the distribution") {
  const ModelParams p = figure_params(100000);
  const SeedSpec seed{123, 4};
  const auto a = kout::sample_classes(p, seed);
  const auto b = kout::sample_classes(p, seed);
  CHECK(a == b);

  std::int64_t class1 = 0;
  for (const std::uint32_t c : a) class1 += c == 0 ? 1 : 0;
  const double frac = static_cast<double>(class1) / 100000.0;
  // 5 sigma of Binomial(1e5, 0.9) is ~0.0047.
  CHECK(std::abs(frac - 0.9) < 0.005);
}

TEST_CASE("selection sets are uniform over 1-subsets") {
  const ModelParams p = make(4, {1.0}, {1});
  std::map<std::uint32_t, int> counts;
  constexpr int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const auto classes = kout::sample_classes(p, {77, static_cast<std::uint64_t>(t)});
    const auto sel = kout::sample_selections(p, classes, {77, static_cast<std::uint64_t>(t)});
    ++counts[sel.row(0)[0]];
  }
  REQUIRE(counts.size() == 3);
  for (const auto& [node, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) / trials - 1.0 / 3.0) < 0.01);
  }
}

TEST_CASE("selection sets are uniform over 2-subsets") {
  const ModelParams p = make(5, {1.0}, {2});
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> counts;
  constexpr int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const auto classes = kout::sample_classes(p, {78, static_cast<std::uint64_t>(t)});
    const auto sel = kout::sample_selections(p, classes, {78, static_cast<std::uint64_t>(t)});
    const auto row = sel.row(1);
    ++counts[{row[0], row[1]}];
  }
  REQUIRE(counts.size() == 6);  // C(4,2) subsets of {0,2,3,4}
  for (const auto& [subset, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) / trials - 1.0 / 6.0) < 0.01);
  }
}

TEST_CASE("both subset-sampling schemes agree with uniformity") {
  // K/(n-1) = 5/9 exceeds the crossover, exercising the shuffle path.
  const ModelParams p = make(10, {1.0}, {5});
  std::map<std::uint32_t, int> membership;
  constexpr int trials = 50000;
  for (int t = 0; t < trials; ++t) {
    const auto classes = kout::sample_classes(p, {80, static_cast<std::uint64_t>(t)});
    const auto sel = kout::sample_selections(p, classes, {80, static_cast<std::uint64_t>(t)});
    const auto row = sel.row(0);
    REQUIRE(row.size() == 5);
    for (std::size_t i = 1; i < row.size(); ++i) REQUIRE(row[i - 1] < row[i]);
    for (const std::uint32_t u : row) {
      REQUIRE(u != 0);
      ++membership[u];
    }
  }
  // Each of the 9 candidates appears with probability 5/9.
  for (const auto& [node, c] : membership) {
    CHECK(std::abs(static_cast<double>(c) / trials - 5.0 / 9.0) < 0.01);
  }
}

TEST_CASE("n=3, K=1 is connected for every seed") {
  const ModelParams p = make(3, {1.0}, {1});
  for (std::uint64_t t = 0; t < 2000; ++t) {
    CHECK(kout::census(kout::build_graph(p, {5, t})).connected);
  }
}

TEST_CASE("build_graph is bit-identical across repeated calls") {
  const ModelParams p = figure_params(500);
  const KOutGraph a = kout::build_graph(p, {2024, 17});
  const KOutGraph b = kout::build_graph(p, {2024, 17});
  CHECK(a.classes == b.classes);
  CHECK(a.selections.flat == b.selections.flat);
  CHECK(a.adjacency.flat == b.adjacency.flat);
  CHECK(a.adjacency.offsets == b.adjacency.offsets);

  const KOutGraph c = kout::build_graph(p, {2024, 18});
  CHECK(a.selections.flat != c.selections.flat);
}

TEST_CASE("adjacency is symmetric, loop-free, and covers all selections") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const KOutGraph g = kout::build_graph(figure_params(200), {31, t});
    CHECK(g.edge_count() <= g.selections.flat.size());
    for (std::uint32_t v = 0; v < g.n; ++v) {
      const std::int64_t kv = 1 + (g.classes[v] == 1 ? 1 : 0) + (g.classes[v] == 2 ? 2 : 0);
      CHECK(static_cast<std::int64_t>(g.selected_by(v).size()) == kv);
      CHECK(g.degree(v) >= g.selected_by(v).size());  // own selections stay adjacent
      for (const std::uint32_t u : g.neighbors(v)) {
        CHECK(u != v);
        const auto back = g.neighbors(u);
        CHECK(std::binary_search(back.begin(), back.end(), v));
      }
      for (const std::uint32_t u : g.selected_by(v)) {
        CHECK(u != v);
        CHECK(u < g.n);
        const auto row = g.neighbors(v);
        CHECK(std::binary_search(row.begin(), row.end(), u));
      }
    }
  }
}

TEST_CASE("mean edge count tracks the pair-adjacency probability") {
  const ModelParams p = figure_params(1000);
  const double expected =
      static_cast<double>(p.n) * static_cast<double>(p.n - 1) / 2.0 * kout::edge_probability(p);
  constexpr int trials = 2000;
  double sum = 0, sq = 0;
  for (int t = 0; t < trials; ++t) {
    const auto edges =
        static_cast<double>(kout::build_graph(p, {909, static_cast<std::uint64_t>(t)}).edge_count());
    sum += edges;
    sq += edges * edges;
  }
  const double mean = sum / trials;
  const double var = (sq - sum * sum / trials) / (trials - 1);
  const double sigma_mean = std::sqrt(var / trials);
  CHECK(std::abs(mean - expected) < 4.0 * sigma_mean);
}

TEST_CASE("graph dump format") {
  const KOutGraph g = kout::build_graph(make(2, {1.0}, {1}), {1, 0});
  std::ostringstream oss;
  kout::write_dump(oss, g);
  CHECK(oss.str() == "# kout v1 n=2\n0\t1\t1\n1\t1\t0\n");
}
