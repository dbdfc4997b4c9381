#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kout/experiment.hpp"
#include "kout/oracle.hpp"

using kout::ExperimentConfig;
using kout::ExperimentResult;
using kout::ModelParams;

namespace {

ModelParams make(std::int64_t n, std::vector<double> mu, std::vector<std::int64_t> k) {
  ModelParams p;
  p.n = n;
  p.dist.probs = std::move(mu);
  p.scaling.ks = std::move(k);
  return p;
}

ExperimentConfig single(ModelParams p, std::uint64_t trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.configurations.push_back(std::move(p));
  c.trials = trials;
  c.master_seed = seed;
  return c;
}

struct ThreadsGuard {
  explicit ThreadsGuard(const char* value) { setenv("KOUT_THREADS", value, 1); }
  ~ThreadsGuard() { unsetenv("KOUT_THREADS"); }
};

}  // namespace

TEST_CASE("normal quantile matches reference values") {
  CHECK(kout::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(kout::normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-10));
  CHECK(kout::normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(kout::normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-10));
  CHECK_THROWS_AS(kout::normal_quantile(0.0), std::invalid_argument);
}

TEST_CASE("wilson interval behaves at the boundaries") {
  const double z = kout::normal_quantile(0.975);
  const auto zero = kout::wilson_interval(0, 1000, z);
  CHECK(zero.low == 0.0);
  CHECK(zero.high > 0.0);
  const auto one = kout::wilson_interval(1000, 1000, z);
  CHECK(one.high == 1.0);
  CHECK(one.low < 1.0);
  for (std::uint64_t s : {1ULL, 250ULL, 999ULL}) {
    const auto iv = kout::wilson_interval(s, 1000, z);
    const double p = static_cast<double>(s) / 1000.0;
    CHECK(iv.low <= p);
    CHECK(iv.high >= p);
    CHECK(iv.low >= 0.0);
    CHECK(iv.high <= 1.0);
  }
  // More trials shrink the interval.
  const auto narrow = kout::wilson_interval(8000, 10000, z);
  const auto wide = kout::wilson_interval(80, 100, z);
  CHECK(narrow.high - narrow.low < wide.high - wide.low);
}

TEST_CASE("wilson interval covers the exact probability across seed batches") {
  const ModelParams p = make(4, {1.0}, {1});
  const double exact =
      kout::exact_connectivity(p).p_connected;  // 78/81
  const double z = kout::normal_quantile(0.975);
  int covered = 0;
  for (std::uint64_t batch = 0; batch < 20; ++batch) {
    const auto results = kout::run(single(p, 2000, 1000 + batch));
    const auto& r = results[0];
    if (r.ci_low <= exact && exact <= r.ci_high) ++covered;
    CHECK(kout::wilson_interval(r.connected_count, r.trials, z).low == doctest::Approx(r.ci_low));
  }
  CHECK(covered >= 17);
}

TEST_CASE("run aggregates exactly and reproducibly") {
  const auto results = kout::run(single(make(50, {0.9, 0.1}, {1, 3}), 4000, 77));
  REQUIRE(results.size() == 1);
  const ExperimentResult& r = results[0];
  CHECK(r.trials == 4000);
  CHECK(r.empirical_p_connected ==
        static_cast<double>(r.connected_count) / static_cast<double>(r.trials));
  CHECK(r.ci_low <= r.empirical_p_connected);
  CHECK(r.ci_high >= r.empirical_p_connected);
  // connected + disconnected partitions the trials exactly
  const double frac_disconnected =
      static_cast<double>(r.trials - r.connected_count) / static_cast<double>(r.trials);
  CHECK(r.empirical_p_connected + frac_disconnected == 1.0);

  const auto again = kout::run(single(make(50, {0.9, 0.1}, {1, 3}), 4000, 77));
  CHECK(again[0].connected_count == r.connected_count);
  CHECK(again[0].mean_y == r.mean_y);
  CHECK(again[0].mean_edges == r.mean_edges);
}

TEST_CASE("results are identical on 1 and 4 workers") {
  ExperimentResult base;
  {
    ThreadsGuard guard("1");
    base = kout::run(single(make(80, {0.8, 0.2}, {1, 4}), 3000, 123))[0];
  }
  ExperimentResult wide;
  {
    ThreadsGuard guard("4");
    wide = kout::run(single(make(80, {0.8, 0.2}, {1, 4}), 3000, 123))[0];
  }
  CHECK(base.connected_count == wide.connected_count);
  CHECK(base.y_zero_count == wide.y_zero_count);
  CHECK(base.mean_y == wide.mean_y);
  CHECK(base.y_sample_var == wide.y_sample_var);
  CHECK(base.mean_edges == wide.mean_edges);
  CHECK(base.edges_sample_var == wide.edges_sample_var);
}

TEST_CASE("empirical connectivity approaches the enumerated value") {
  const ModelParams p = make(4, {1.0}, {1});
  const double exact = 78.0 / 81.0;
  const auto r = kout::run(single(p, 20000, 5))[0];
  const double sigma = std::sqrt(exact * (1.0 - exact) / 20000.0);
  CHECK(std::abs(r.empirical_p_connected - exact) < 4.0 * sigma);
}

TEST_CASE("component histogram is optional and consistent") {
  ExperimentConfig c = single(make(30, {0.9, 0.1}, {1, 2}), 500, 9);
  c.outputs.component_histogram = true;
  const auto r = kout::run(c)[0];
  std::uint64_t nodes = 0;
  for (const auto& [size, count] : r.component_histogram) {
    nodes += static_cast<std::uint64_t>(size) * count;
  }
  CHECK(nodes == 30ULL * 500ULL);

  const auto without = kout::run(single(make(30, {0.9, 0.1}, {1, 2}), 500, 9))[0];
  CHECK(without.component_histogram.empty());
}

TEST_CASE("config document parsing and sweep expansion") {
  nlohmann::json doc = {{"n", 100},          {"mu", {0.9, 0.06, 0.04}}, {"k", {1, 2, 3}},
                        {"trials", 777},     {"master_seed", 31},       {"confidence_level", 0.9},
                        {"kr_range", {{"from", 3}, {"to", 8}}}};
  const ExperimentConfig c = kout::experiment_config_from_json(doc);
  CHECK(c.trials == 777);
  CHECK(c.master_seed == 31);
  CHECK(c.confidence_level == doctest::Approx(0.9));
  REQUIRE(c.configurations.size() == 6);
  CHECK(c.configurations[0].scaling.ks == std::vector<std::int64_t>{1, 2, 3});
  CHECK(c.configurations[5].scaling.ks == std::vector<std::int64_t>{1, 2, 8});

  doc.erase("kr_range");
  doc["n_list"] = {50, 100, 200};
  const ExperimentConfig cn = kout::experiment_config_from_json(doc);
  REQUIRE(cn.configurations.size() == 3);
  CHECK(cn.configurations[2].n == 200);

  doc["kr_range"] = {{"from", 3}, {"to", 4}};
  CHECK_THROWS_AS(kout::experiment_config_from_json(doc), std::invalid_argument);

  nlohmann::json bad_output = {{"n", 10}, {"mu", {1.0}}, {"k", {1}}, {"outputs", {"bogus"}}};
  CHECK_THROWS_AS(kout::experiment_config_from_json(bad_output), std::invalid_argument);
}

TEST_CASE("CSV schema: pinned header, one row per configuration") {
  nlohmann::json doc = {{"n", 20},
                        {"mu", {0.9, 0.06, 0.04}},
                        {"k", {1, 2, 3}},
                        {"trials", 50},
                        {"master_seed", 3},
                        {"kr_range", {{"from", 3}, {"to", 5}}}};
  const auto results = kout::run(kout::experiment_config_from_json(doc));
  std::ostringstream oss;
  kout::write_csv(oss, results);
  std::istringstream iss(oss.str());
  std::string header;
  std::getline(iss, header);
  CHECK(header ==
        "n,mu,k,trials,seed,p_connected,ci_low,ci_high,mean_y,p_y_zero,"
        "upper_bound,lower_bound,lower_bound_valid,second_moment_bound,union_bound");
  int rows = 0;
  std::string line;
  while (std::getline(iss, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 14);
    CHECK(line.find("0.9;0.06;0.04") != std::string::npos);
  }
  CHECK(rows == 3);
}

TEST_CASE("result JSON carries the aggregates and bounds") {
  const auto r = kout::run(single(make(40, {1.0}, {2}), 200, 8))[0];
  const nlohmann::json j = kout::result_to_json(r);
  for (const char* key : {"params", "trials", "master_seed", "empirical_p_connected", "ci_low",
                          "ci_high", "mean_y", "empirical_p_y_zero", "mean_edges", "bounds"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.at("bounds").contains("upper_bound_asymptotic"));
}

TEST_CASE("run validates its configuration") {
  ExperimentConfig empty;
  CHECK_THROWS_AS(kout::run(empty), std::invalid_argument);

  ExperimentConfig zero_trials = single(make(10, {1.0}, {1}), 0, 0);
  CHECK_THROWS_AS(kout::run(zero_trials), std::invalid_argument);

  ExperimentConfig bad_params = single(make(10, {0.5, 0.6}, {1, 2}), 10, 0);
  CHECK_THROWS_AS(kout::run(bad_params), kout::ValidationError);
}
