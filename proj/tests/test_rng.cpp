#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "kout/rng.hpp"

using kout::SeedSpec;
using kout::Splitmix64;
using kout::StreamDomain;

TEST_CASE("stream reproduces the published splitmix64 sequence for seed 0") {
  Splitmix64 rng(0);
  CHECK(rng.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next_u64() == 0x06c45d188009454fULL);
}

TEST_CASE("identical seeds give identical streams") {
  Splitmix64 a(12345);
  Splitmix64 b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("trial streams separate by trial index and domain") {
  const SeedSpec seed{42, 7};
  Splitmix64 classes = kout::trial_stream(seed, StreamDomain::classes);
  Splitmix64 selections = kout::trial_stream(seed, StreamDomain::selections);
  CHECK(classes.next_u64() != selections.next_u64());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    firsts.insert(kout::trial_stream({42, trial}, StreamDomain::selections).next_u64());
  }
  CHECK(firsts.size() == 1000);
}

TEST_CASE("next_double lies in [0,1)") {
  Splitmix64 rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_below respects the bound and is unbiased") {
  Splitmix64 rng(11);
  constexpr std::uint64_t bound = 10;
  constexpr int draws = 200000;
  std::vector<int> counts(bound, 0);
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.uniform_below(bound);
    REQUIRE(v < bound);
    ++counts[v];
  }
  // Each bin is Binomial(draws, 1/10): sd ~ 134, so 5 sd ~ 670.
  for (const int c : counts) CHECK(std::abs(c - draws / 10) < 700);
}

TEST_CASE("uniform_below handles bound 1 and large bounds") {
  Splitmix64 rng(5);
  CHECK(rng.uniform_below(1) == 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.uniform_below(1ULL << 62) < (1ULL << 62));
  }
}
