#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kout/oracle.hpp"
#include "kout/theory.hpp"

using kout::BigRational;
using kout::ExactResult;
using kout::ModelParams;

namespace {

ModelParams make(std::int64_t n, std::vector<double> mu, std::vector<std::int64_t> k) {
  ModelParams p;
  p.n = n;
  p.dist.probs = std::move(mu);
  p.scaling.ks = std::move(k);
  return p;
}

BigRational q(long long num, long long den) { return BigRational(num, den); }

}  // namespace

TEST_CASE("forced pair is always connected") {
  const ExactResult r = kout::exact_connectivity(make(2, {1.0}, {1}));
  CHECK(r.exact_rational);
  CHECK(r.p_connected_q == 1);
  CHECK(r.e_y_q == 1);  // the whole graph is one isolated mutual class-1 pair
  CHECK(r.state_count == 1);
}

TEST_CASE("n=3, K=1: all 8 configurations connected") {
  const ExactResult r = kout::exact_connectivity(make(3, {1.0}, {1}));
  CHECK(r.state_count == 8);
  CHECK(r.p_connected_q == 1);
  CHECK(r.e_y_q == 0);
  CHECK(r.p_y_zero_q == 1);
}

TEST_CASE("n=4, K=1: 78/81 connected, E[Y] = 2/27") {
  const ExactResult r = kout::exact_connectivity(make(4, {1.0}, {1}));
  CHECK(r.state_count == 81);
  CHECK(r.p_connected_q == q(78, 81));
  CHECK(r.e_y_q == q(2, 27));
  CHECK(r.p_y_zero_q == q(26, 27));
  CHECK(r.p_connected == doctest::Approx(78.0 / 81.0).epsilon(1e-15));

  // Exact E[Y] agrees with the closed form to rational exactness.
  CHECK(kout::expected_isolated_pairs(make(4, {1.0}, {1})) ==
        doctest::Approx(static_cast<double>(2.0 / 27.0)).epsilon(1e-15));
}

TEST_CASE("inhomogeneous n=5 instance matches its independent enumeration") {
  // Values fixed by a from-scratch enumeration of all 10^5 weighted states.
  const ExactResult r = kout::exact_connectivity(make(5, {0.5, 0.5}, {1, 2}));
  CHECK(r.exact_rational);
  CHECK(r.state_count == 100000);
  CHECK(r.p_connected_q == q(859, 864));
  CHECK(r.e_y_q == q(5, 864));
  CHECK(r.p_y_zero_q == q(859, 864));

  CHECK(kout::expected_isolated_pairs(make(5, {0.5, 0.5}, {1, 2})) ==
        doctest::Approx(5.0 / 864.0).epsilon(1e-12));
}

TEST_CASE("homogeneous n=6, K=2: one disconnected configuration in 10^5") {
  const ExactResult r = kout::exact_connectivity(make(6, {1.0}, {2}));
  CHECK(r.state_count == 1000000);
  CHECK(r.p_connected_q == q(99999, 100000));
  CHECK(r.e_y_q == 0);      // K_1 = 2: no mutual-singleton pairs exist
  CHECK(r.p_y_zero_q == 1);
}

TEST_CASE("oracle bounds sandwich the exact values") {
  const ModelParams instances[] = {
      make(4, {1.0}, {1}),
      make(5, {0.5, 0.5}, {1, 2}),
      make(6, {0.5, 0.5}, {1, 1}),
      make(6, {1.0}, {2}),
  };
  for (const ModelParams& p : instances) {
    const ExactResult r = kout::exact_connectivity(p);
    const double disconnect = 1.0 - r.p_connected;
    CHECK(disconnect <= kout::union_bound_disconnect(p).raw + 1e-12);
    if (p.n >= 6) {
      CHECK(r.p_y_zero <= kout::second_moment_upper_bound(p) + 1e-12);
    }
  }
}

TEST_CASE("state budget guard refuses large instances with the computed count") {
  try {
    kout::exact_connectivity(make(12, {1.0}, {1}));
    FAIL("expected OracleError");
  } catch (const kout::OracleError& e) {
    // 11^12 states
    CHECK(e.state_count() == 3138428376721ULL);
  }
  CHECK(kout::oracle_state_count(make(4, {1.0}, {1})) == 81);
}

TEST_CASE("non-reconstructible mu falls back to extended precision") {
  // 1/1234567 cannot be expressed with denominator <= 10^6.
  const double tiny = 1.0 / 1234567.0;
  const ExactResult r = kout::exact_connectivity(make(3, {tiny, 1.0 - tiny}, {1, 1}));
  CHECK_FALSE(r.exact_rational);
  CHECK(r.p_connected == doctest::Approx(1.0).epsilon(1e-12));  // n=3, K=1 always connected
  CHECK(r.e_y == doctest::Approx(0.0));
}

TEST_CASE("reconstructed thirds stay exact") {
  const ExactResult r = kout::exact_connectivity(make(4, {1.0 / 3.0, 2.0 / 3.0}, {1, 1}));
  CHECK(r.exact_rational);
  // Class labels do not affect the topology when K is constant.
  CHECK(r.p_connected_q == q(78, 81));
}
