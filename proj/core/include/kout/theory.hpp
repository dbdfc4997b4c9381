#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "kout/model.hpp"

namespace kout {

/// Probability that two fixed distinct nodes are adjacent:
/// 1 - (1 - K_avg/(n-1))^2.
double edge_probability(const ModelParams& params);

/// C(mu,K) = 1 / (1 + (2/mu_1^2) e^{2 K_avg}), evaluated in log space so
/// large K_avg cannot overflow. Always in (0,1).
double c_value(const ModelParams& params);

/// Upper bound on the connectivity probability when K_r stays bounded:
/// 1 - C(mu,K). The vanishing finite-size correction is dropped; the exact
/// finite-n statement is second_moment_upper_bound.
double zero_law_upper_bound(const ModelParams& params);

/// Psi(n,mu,K): max of the two exponential terms driving the explicit
/// connectivity lower bound. Requires r >= 2 (mu_tilde > 0).
double psi(const ModelParams& params);

struct OneLawBound {
  double value = 0.0;  // max(0, 1 - (mu_tilde^2/(1-mu_tilde)) * Psi)
  bool valid = false;  // K_r >= ceil(4 * 0.5^{K_r-1}/mu_tilde + 1)
  bool trivial = false;  // the unclamped bound was <= 0
};

/// Explicit lower bound on the connectivity probability, clamped at zero.
/// `valid` reports whether K_r satisfies the threshold under which the bound
/// statement applies. Requires r >= 2.
OneLawBound one_law_lower_bound(const ModelParams& params);

/// Smallest K >= 2 making the lower bound non-trivial in the large-n limit:
/// (a) K meets the validity threshold, (b) the n-scaled exponential term
/// vanishes, (c) (mu_tilde^2/(1-mu_tilde)) * first Psi term < 1.
std::int64_t k_star(double mu_tilde);

/// Exact E[Y]: expected number of isolated mutual class-1 pairs,
/// C(n,2) mu_1^2 (n-1)^{-2} (sum_i mu_i C(n-3,K_i)/C(n-1,K_i))^{n-2}.
/// Zero whenever K_1 != 1 (a class-1 node then selects more than one node).
/// Requires n >= 4.
double expected_isolated_pairs(const ModelParams& params);

/// Exact finite-n bound P[Y=0] <= 1 - (E[Y])^2 / E[Y^2], an upper bound on
/// the connectivity probability. Requires n >= 6. Returns 1 when E[Y] = 0
/// (the bound degenerates to the trivial one).
double second_moment_upper_bound(const ModelParams& params);

/// Exact probability that a fixed set of `ell` nodes has no edge to its
/// complement. Requires 2 <= ell <= n/2. Binomials with undersized top
/// argument evaluate to zero.
double isolation_probability(const ModelParams& params, std::int64_t ell);

struct UnionBoundResult {
  double raw = 0.0;      // sum_{ell=2}^{n/2} C(n,ell) P[B_{n,ell}], may exceed 1
  double clamped = 0.0;  // min(1, raw)
};

/// Union bound on the probability of disconnection.
UnionBoundResult union_bound_disconnect(const ModelParams& params);

/// C(x,K)/C(y,K) for x <= y via exact telescoping products (never through
/// log-gamma differences). Zero when x < K.
double binom_ratio(std::int64_t x, std::int64_t y, std::int64_t k);

/// log C(n,k) via log-gamma; absolute error within ~1e-9 per term.
double log_choose(std::int64_t n, std::int64_t k);

// Inequality checks backing the numeric helpers; each evaluates both sides
// on the stated domain.
bool fact1_holds(double x, std::int64_t y);                      // 0<=x<1, y>=0
bool fact2_holds(std::int64_t y, std::int64_t x, std::int64_t z);  // y>=2x>=2, 0<=z<=x
bool fact3_holds(std::int64_t n, std::int64_t r);                // 1<=r<=n/2

struct FactChecks {
  std::optional<bool> fact1;  // at (x, y)
  std::optional<bool> fact2;  // at (y, x=k, z=round(x))
  std::optional<bool> fact3;  // at (n=y, r=k)
};

/// Evaluates whichever of the three inequalities the arguments fall in-domain
/// for; throws if none applies.
FactChecks fact_inequalities(double x, std::int64_t y, std::int64_t k);

/// All closed-form quantities for one parameterization. Fields that require
/// r >= 2 (psi_value, lower_bound_one_law) or n >= 6
/// (second_moment_upper_bound) are absent when undefined.
struct BoundReport {
  double k_avg = 0.0;
  double edge_prob = 0.0;
  double c_value = 0.0;
  double upper_bound_asymptotic = 0.0;  // 1 - C
  double mu_tilde = 0.0;
  std::optional<double> psi_value;
  std::optional<double> lower_bound_one_law;
  bool lower_bound_valid = false;
  bool lower_bound_trivial = false;
  std::optional<double> second_moment_upper_bound;
  double union_bound_disconnect = 0.0;  // raw
  double union_bound_clamped = 0.0;
};

BoundReport bound_report(const ModelParams& params);
nlohmann::json bound_report_to_json(const BoundReport& report);

namespace detail {

/// Per-set-size exponential bound A_{n,ell}; diagnostic only. Whenever the
/// one-law validity threshold holds, A_{n,ell} <= Psi for 2 <= ell <= n/2.
double a_n_ell(std::int64_t n, std::int64_t ell, double mu_tilde, std::int64_t k_r);

/// log P[B_{n,ell}]; -inf when the probability is exactly zero.
double log_isolation_probability(const ModelParams& params, std::int64_t ell);

}  // namespace detail

}  // namespace kout
