#include "kout/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace kout {

namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kU64Max / a) return kU64Max;
  return a * b;
}

std::uint64_t choose_u64(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // exact at each step: out * (n-k+i) is divisible by i
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (out > kU64Max / num) return kU64Max;
    out = out * num / static_cast<std::uint64_t>(i);
  }
  return out;
}

// Best rational p/q with q <= max_den matching x via continued fractions.
std::optional<BigRational> rational_from_double(double x, std::int64_t max_den) {
  if (x == 1.0) return BigRational(1);
  if (!(x > 0.0 && x < 1.0)) return std::nullopt;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double af = std::floor(v);
    if (af > 1e15) break;
    const auto a = static_cast<std::int64_t>(af);
    if (q1 > 0 && a > (max_den - q0) / q1) break;  // next denominator too large
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double rem = v - af;
    if (q1 > 0 && std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) < 1e-12) break;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  if (q1 <= 0 || q1 > max_den) return std::nullopt;
  if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) > 1e-9) return std::nullopt;
  return BigRational(BigInt(p1), BigInt(q1));
}

// All K-subsets of {0..n-1}\{v} as node bitmasks, lexicographic over
// candidate indices.
std::vector<std::uint32_t> subset_masks(std::uint32_t n, std::uint32_t v, std::int64_t k) {
  const std::uint32_t m = n - 1;
  std::vector<std::uint32_t> masks;
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
  for (;;) {
    std::uint32_t mask = 0;
    for (const std::uint32_t c : idx) {
      const std::uint32_t node = c >= v ? c + 1 : c;
      mask |= 1u << node;
    }
    masks.push_back(mask);
    std::int64_t i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                         m - static_cast<std::uint32_t>(k) + static_cast<std::uint32_t>(i)) {
      --i;
    }
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return masks;
}

struct AssignmentTally {
  std::uint64_t configs = 0;  // denominator: product of per-node subset counts
  std::uint64_t connected = 0;
  std::uint64_t y_sum = 0;
  std::uint64_t y_zero = 0;
};

// Enumerates every selection configuration for a fixed class assignment.
// class1_mask marks the nodes assigned to class 1; only those can form a
// Y-counted pair.
AssignmentTally tally_assignment(std::uint32_t n, std::uint32_t class1_mask,
                                 const std::vector<const std::vector<std::uint32_t>*>& options) {
  AssignmentTally tally;
  tally.configs = 1;
  for (std::uint32_t v = 0; v < n; ++v) tally.configs *= options[v]->size();

  // n <= 8 whenever the state budget admits the instance, so node sets fit
  // into 32-bit masks.
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> digit(n, 0);
  std::vector<std::uint32_t> sel(n);
  std::vector<std::uint32_t> adj(n);
  for (std::uint32_t v = 0; v < n; ++v) sel[v] = (*options[v])[0];

  for (std::uint64_t step = 0; step < tally.configs; ++step) {
    // adjacency = selections in both directions
    for (std::uint32_t v = 0; v < n; ++v) adj[v] = sel[v];
    for (std::uint32_t v = 0; v < n; ++v) {
      std::uint32_t bits = sel[v];
      while (bits) {
        const unsigned u = static_cast<unsigned>(std::countr_zero(bits));
        bits &= bits - 1;
        adj[u] |= 1u << v;
      }
    }

    std::uint32_t reach = 1u;
    for (;;) {
      std::uint32_t next = reach;
      std::uint32_t bits = reach;
      while (bits) {
        const unsigned v = static_cast<unsigned>(std::countr_zero(bits));
        bits &= bits - 1;
        next |= adj[v];
      }
      if (next == reach) break;
      reach = next;
    }
    if (reach == full) ++tally.connected;

    std::uint32_t y = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (std::popcount(sel[i]) != 1) continue;
      const auto j = static_cast<std::uint32_t>(std::countr_zero(sel[i]));
      if (j <= i) continue;
      if (sel[j] != (1u << i)) continue;
      const std::uint32_t pair = (1u << i) | (1u << j);
      if ((pair & class1_mask) != pair) continue;
      std::uint32_t others = 0;
      for (std::uint32_t l = 0; l < n; ++l) {
        if (l != i && l != j) others |= sel[l];
      }
      if ((others & pair) == 0) ++y;
    }
    tally.y_sum += y;
    if (y == 0) ++tally.y_zero;

    // advance the mixed-radix selection odometer
    for (std::uint32_t v = 0; v < n; ++v) {
      if (++digit[v] < options[v]->size()) {
        sel[v] = (*options[v])[digit[v]];
        break;
      }
      digit[v] = 0;
      sel[v] = (*options[v])[0];
    }
  }
  return tally;
}

}  // namespace

std::uint64_t oracle_state_count(const ModelParams& params) {
  std::uint64_t per_node = 0;
  for (std::size_t i = 0; i < params.r(); ++i) {
    const std::uint64_t c = choose_u64(params.n - 1, params.scaling.ks[i]);
    if (c == kU64Max || per_node > kU64Max - c) return kU64Max;
    per_node += c;
  }
  std::uint64_t total = 1;
  for (std::int64_t v = 0; v < params.n; ++v) total = saturating_mul(total, per_node);
  return total;
}

ExactResult exact_connectivity(const ModelParams& params) {
  validate(params);
  const std::uint64_t states = oracle_state_count(params);
  if (states > kMaxOracleStates) {
    throw OracleError("instance too large to enumerate: " +
                          (states == kU64Max ? std::string("more than 2^64")
                                             : std::to_string(states)) +
                          " states exceed budget " + std::to_string(kMaxOracleStates),
                      states);
  }
  const auto n = static_cast<std::uint32_t>(params.n);
  const std::size_t r = params.r();

  // Per node and class: all admissible selection masks. pair-restricted Y
  // events only need class-1 singletons, but the enumeration is total anyway.
  std::vector<std::vector<std::vector<std::uint32_t>>> masks(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    masks[v].resize(r);
    for (std::size_t i = 0; i < r; ++i) {
      masks[v][i] = subset_masks(n, v, params.scaling.ks[i]);
    }
  }

  // Exact class weights when every mu entry reconstructs as a small rational
  // and the reconstruction sums to one.
  std::vector<BigRational> mu_q;
  bool exact = true;
  BigRational mu_sum = 0;
  for (std::size_t i = 0; i < r; ++i) {
    const auto q = rational_from_double(params.dist.probs[i], 1'000'000);
    if (!q) {
      exact = false;
      break;
    }
    mu_q.push_back(*q);
    mu_sum += *q;
  }
  if (exact && mu_sum != 1) exact = false;

  ExactResult result;
  result.exact_rational = exact;
  result.state_count = states;

  BigRational p_conn_q = 0, e_y_q = 0, p_y0_q = 0;
  long double p_conn_r = 0, e_y_r = 0, p_y0_r = 0;

  std::vector<std::uint32_t> assign(n, 0);
  std::vector<const std::vector<std::uint32_t>*> options(n);
  for (;;) {
    std::uint32_t class1_mask = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      options[v] = &masks[v][assign[v]];
      if (assign[v] == 0) class1_mask |= 1u << v;
    }
    const AssignmentTally tally = tally_assignment(n, class1_mask, options);

    if (exact) {
      BigRational weight = 1;
      for (std::uint32_t v = 0; v < n; ++v) weight *= mu_q[assign[v]];
      const BigInt denom(tally.configs);
      p_conn_q += weight * BigRational(BigInt(tally.connected), denom);
      e_y_q += weight * BigRational(BigInt(tally.y_sum), denom);
      p_y0_q += weight * BigRational(BigInt(tally.y_zero), denom);
    } else {
      long double weight = 1;
      for (std::uint32_t v = 0; v < n; ++v) weight *= params.dist.probs[assign[v]];
      const auto denom = static_cast<long double>(tally.configs);
      p_conn_r += weight * tally.connected / denom;
      e_y_r += weight * tally.y_sum / denom;
      p_y0_r += weight * tally.y_zero / denom;
    }

    std::uint32_t v = 0;
    while (v < n && ++assign[v] == r) assign[v++] = 0;
    if (v == n) break;
  }

  if (exact) {
    result.p_connected_q = p_conn_q;
    result.e_y_q = e_y_q;
    result.p_y_zero_q = p_y0_q;
    result.p_connected = p_conn_q.convert_to<double>();
    result.e_y = e_y_q.convert_to<double>();
    result.p_y_zero = p_y0_q.convert_to<double>();
  } else {
    result.p_connected = static_cast<double>(p_conn_r);
    result.e_y = static_cast<double>(e_y_r);
    result.p_y_zero = static_cast<double>(p_y0_r);
  }
  return result;
}

}  // namespace kout
