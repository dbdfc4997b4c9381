#include "kout/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kout {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(x) underflows to zero below this; smaller log-terms contribute nothing.
constexpr double kLogFloor = -745.0;

double half_pow(std::int64_t k_minus_1) {
  // 0.5^{k-1}, exact for every representable exponent.
  if (k_minus_1 > 1073) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(k_minus_1));
}

std::int64_t kr(const ModelParams& params) { return params.scaling.ks.back(); }

void require_heterogeneous(const ModelParams& params, const char* op) {
  if (params.r() < 2) {
    throw std::invalid_argument(std::string(op) +
                                " requires at least two classes (mu_tilde would be zero)");
  }
}

}  // namespace

double binom_ratio(std::int64_t x, std::int64_t y, std::int64_t k) {
  if (k == 0) return 1.0;
  if (x < k) return 0.0;
  if (x == y) return 1.0;
  const std::int64_t d = y - x;
  double out = 1.0;
  if (k <= d) {
    for (std::int64_t l = 0; l < k; ++l) {
      out *= static_cast<double>(x - l) / static_cast<double>(y - l);
    }
  } else {
    // C(y-d,k)/C(y,k) telescopes to d factors when d < k.
    for (std::int64_t j = 0; j < d; ++j) {
      out *= static_cast<double>(y - k - j) / static_cast<double>(y - j);
    }
  }
  return out;
}

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -kInf;
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

double edge_probability(const ModelParams& params) {
  const double q = 1.0 - k_avg(params) / static_cast<double>(params.n - 1);
  return 1.0 - q * q;
}

double c_value(const ModelParams& params) {
  // C = 1/(1 + e^L) with L = log 2 - 2 log mu_1 + 2 K_avg; sigmoid form keeps
  // both tails finite.
  const double log_odds =
      std::log(2.0) - 2.0 * std::log(params.dist.probs.front()) + 2.0 * k_avg(params);
  if (log_odds > 0) {
    const double e = std::exp(-log_odds);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(log_odds));
}

double zero_law_upper_bound(const ModelParams& params) { return 1.0 - c_value(params); }

double psi(const ModelParams& params) {
  require_heterogeneous(params, "psi");
  const double mt = mu_tilde(params);
  const std::int64_t k = kr(params);
  const double tail = half_pow(k - 1) / mt;
  const double e1 = -2.0 * (1.0 - mt) * (static_cast<double>(k - 1) / 4.0 - tail);
  const double e2 =
      -(1.0 - mt) * (static_cast<double>(params.n) / 2.0) * (1.0 - std::exp(-1.0) - tail);
  return std::max(std::exp(e1), std::exp(e2));
}

OneLawBound one_law_lower_bound(const ModelParams& params) {
  require_heterogeneous(params, "one_law_lower_bound");
  const double mt = mu_tilde(params);
  const std::int64_t k = kr(params);

  OneLawBound out;
  const double threshold = std::ceil(4.0 * (half_pow(k - 1) / mt) + 1.0);
  out.valid = static_cast<double>(k) >= threshold;

  const double raw = 1.0 - (mt * mt / (1.0 - mt)) * psi(params);
  out.trivial = !(raw > 0.0);
  out.value = std::max(0.0, raw);
  return out;
}

std::int64_t k_star(double mu_tilde) {
  if (!(mu_tilde > 0.0) || !(mu_tilde < 1.0)) {
    throw std::invalid_argument("k_star requires mu_tilde in (0,1)");
  }
  constexpr std::int64_t kLimit = 1'000'000;
  const double prefactor = mu_tilde * mu_tilde / (1.0 - mu_tilde);
  for (std::int64_t k = 2; k <= kLimit; ++k) {
    const double tail = half_pow(k - 1) / mu_tilde;
    const bool meets_threshold = static_cast<double>(k) >= std::ceil(4.0 * tail + 1.0);
    const bool second_term_vanishes = 1.0 - std::exp(-1.0) - tail > 0.0;
    const double first_term = std::exp(-2.0 * (1.0 - mu_tilde) *
                                       (static_cast<double>(k - 1) / 4.0 - tail));
    if (meets_threshold && second_term_vanishes && prefactor * first_term < 1.0) return k;
  }
  throw std::runtime_error("k_star: no admissible K below 10^6");
}

double expected_isolated_pairs(const ModelParams& params) {
  if (params.n < 4) {
    throw std::invalid_argument("expected_isolated_pairs requires n >= 4");
  }
  if (params.scaling.ks.front() != 1) return 0.0;  // Gamma = {j} needs K_1 = 1

  const auto n = static_cast<double>(params.n);
  double base = 0.0;
  for (std::size_t i = 0; i < params.r(); ++i) {
    const auto k = static_cast<double>(params.scaling.ks[i]);
    base += params.dist.probs[i] * ((n - 1.0 - k) * (n - 2.0 - k)) / ((n - 1.0) * (n - 2.0));
  }
  if (base <= 0.0) return 0.0;

  const double mu1 = params.dist.probs.front();
  // C(n,2) * (n-1)^{-2} = n / (2 (n-1)).
  const double log_ey = std::log(mu1 * mu1 / 2.0) + std::log(n / (n - 1.0)) +
                        (n - 2.0) * std::log(base);
  return std::exp(log_ey);
}

double second_moment_upper_bound(const ModelParams& params) {
  if (params.n < 6) {
    throw std::invalid_argument("second_moment_upper_bound requires n >= 6");
  }
  const double ey = expected_isolated_pairs(params);
  if (ey <= 0.0) return 1.0;

  const std::int64_t n = params.n;
  double base = 0.0;
  for (std::size_t i = 0; i < params.r(); ++i) {
    base += params.dist.probs[i] * binom_ratio(n - 5, n - 1, params.scaling.ks[i]);
  }
  double cross = 0.0;  // C(n,2) C(n-2,2) E[chi_12 chi_34]
  if (base > 0.0) {
    const double mu1 = params.dist.probs.front();
    const double log_cross = log_choose(n, 2) + log_choose(n - 2, 2) +
                             4.0 * std::log(mu1 / static_cast<double>(n - 1)) +
                             static_cast<double>(n - 4) * std::log(base);
    cross = std::exp(log_cross);
  }
  const double ey2 = ey + cross;
  return 1.0 - (ey * ey) / ey2;
}

namespace detail {

double log_isolation_probability(const ModelParams& params, std::int64_t ell) {
  const std::int64_t n = params.n;
  double inside = 0.0;   // sum_i mu_i C(ell-1,K_i)/C(n-1,K_i)
  double outside = 0.0;  // sum_i mu_i C(n-ell-1,K_i)/C(n-1,K_i)
  for (std::size_t i = 0; i < params.r(); ++i) {
    const std::int64_t k = params.scaling.ks[i];
    inside += params.dist.probs[i] * binom_ratio(ell - 1, n - 1, k);
    outside += params.dist.probs[i] * binom_ratio(n - ell - 1, n - 1, k);
  }
  if (inside <= 0.0 || outside <= 0.0) return -kInf;
  return static_cast<double>(ell) * std::log(inside) +
         static_cast<double>(n - ell) * std::log(outside);
}

double a_n_ell(std::int64_t n, std::int64_t ell, double mu_tilde, std::int64_t k_r) {
  const double l = static_cast<double>(ell);
  const double nn = static_cast<double>(n);
  const double ratio_pow = std::pow(l / nn, static_cast<double>(k_r - 1));
  const double exponent =
      (1.0 - mu_tilde) / mu_tilde * l * ratio_pow -
      (1.0 - mu_tilde) * (nn - l) * (1.0 - std::exp(-l * static_cast<double>(k_r - 1) / nn));
  return std::exp(exponent);
}

}  // namespace detail

double isolation_probability(const ModelParams& params, std::int64_t ell) {
  if (ell < 2 || ell > params.n / 2) {
    throw std::invalid_argument("isolation_probability requires 2 <= ell <= n/2, got ell = " +
                                std::to_string(ell));
  }
  const double lp = detail::log_isolation_probability(params, ell);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

UnionBoundResult union_bound_disconnect(const ModelParams& params) {
  const std::int64_t n = params.n;
  double sum = 0.0;
  for (std::int64_t ell = 2; ell <= n / 2; ++ell) {
    const double log_term = log_choose(n, ell) + detail::log_isolation_probability(params, ell);
    if (log_term > kLogFloor) sum += std::exp(log_term);
  }
  return {sum, std::min(1.0, sum)};
}

bool fact1_holds(double x, std::int64_t y) {
  if (!(x >= 0.0 && x < 1.0) || y < 0) {
    throw std::invalid_argument("fact1 requires 0 <= x < 1 and y >= 0");
  }
  const double xy = x * static_cast<double>(y);
  const double mid = std::pow(1.0 - x, static_cast<double>(y));
  const double slack = 1e-9 * std::max(1.0, xy);
  return 1.0 - xy <= mid + slack && mid <= 1.0 - xy + 0.5 * xy * xy + slack;
}

bool fact2_holds(std::int64_t y, std::int64_t x, std::int64_t z) {
  if (x < 1 || y < 2 * x || z < 0 || z > x) {
    throw std::invalid_argument("fact2 requires positive x, y >= 2x, 0 <= z <= x");
  }
  const double lhs = binom_ratio(y - z, y, x);
  const double rhs =
      1.0 - static_cast<double>(z) * static_cast<double>(x) / static_cast<double>(y - z);
  return lhs >= rhs - 1e-12;
}

bool fact3_holds(std::int64_t n, std::int64_t r) {
  if (r < 1 || r > n / 2) {
    throw std::invalid_argument("fact3 requires 1 <= r <= n/2");
  }
  const double nn = static_cast<double>(n);
  const double rr = static_cast<double>(r);
  const double log_rhs = rr * std::log(nn / rr) + (nn - rr) * std::log(nn / (nn - rr));
  return log_choose(n, r) <= log_rhs + 1e-9;
}

FactChecks fact_inequalities(double x, std::int64_t y, std::int64_t k) {
  FactChecks out;
  if (x >= 0.0 && x < 1.0 && y >= 0) out.fact1 = fact1_holds(x, y);
  const auto z = static_cast<std::int64_t>(std::llround(x));
  if (k >= 1 && y >= 2 * k && z >= 0 && z <= k &&
      std::abs(x - static_cast<double>(z)) < 1e-9) {
    out.fact2 = fact2_holds(y, k, z);
  }
  if (k >= 1 && k <= y / 2) out.fact3 = fact3_holds(y, k);
  if (!out.fact1 && !out.fact2 && !out.fact3) {
    throw std::invalid_argument("fact_inequalities: arguments outside every fact's domain");
  }
  return out;
}

BoundReport bound_report(const ModelParams& params) {
  BoundReport rep;
  rep.k_avg = k_avg(params);
  rep.edge_prob = edge_probability(params);
  rep.c_value = c_value(params);
  rep.upper_bound_asymptotic = 1.0 - rep.c_value;
  rep.mu_tilde = mu_tilde(params);
  if (params.r() >= 2) {
    rep.psi_value = psi(params);
    const OneLawBound one_law = one_law_lower_bound(params);
    rep.lower_bound_one_law = one_law.value;
    rep.lower_bound_valid = one_law.valid;
    rep.lower_bound_trivial = one_law.trivial;
  }
  if (params.n >= 6) {
    rep.second_moment_upper_bound = second_moment_upper_bound(params);
  }
  const UnionBoundResult ub = union_bound_disconnect(params);
  rep.union_bound_disconnect = ub.raw;
  rep.union_bound_clamped = ub.clamped;
  return rep;
}

nlohmann::json bound_report_to_json(const BoundReport& report) {
  nlohmann::json j{
      {"k_avg", report.k_avg},
      {"edge_prob", report.edge_prob},
      {"c_value", report.c_value},
      {"upper_bound_asymptotic", report.upper_bound_asymptotic},
      {"mu_tilde", report.mu_tilde},
      {"lower_bound_valid", report.lower_bound_valid},
      {"lower_bound_trivial", report.lower_bound_trivial},
      {"union_bound_disconnect", report.union_bound_disconnect},
      {"union_bound_clamped", report.union_bound_clamped},
  };
  j["psi_value"] = report.psi_value ? nlohmann::json(*report.psi_value) : nlohmann::json();
  j["lower_bound_one_law"] =
      report.lower_bound_one_law ? nlohmann::json(*report.lower_bound_one_law) : nlohmann::json();
  j["second_moment_upper_bound"] = report.second_moment_upper_bound
                                       ? nlohmann::json(*report.second_moment_upper_bound)
                                       : nlohmann::json();
  return j;
}

}  // namespace kout
