#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "kout/model.hpp"

namespace kout {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Refusal to enumerate an instance beyond the state budget.
class OracleError : public std::runtime_error {
 public:
  OracleError(const std::string& what, std::uint64_t state_count)
      : std::runtime_error(what), state_count_(state_count) {}
  std::uint64_t state_count() const noexcept { return state_count_; }

 private:
  std::uint64_t state_count_;
};

/// Ground truth from total enumeration of every (class assignment,
/// selection-set tuple). Rationals are exact when every mu entry is a
/// rational with denominator <= 10^6; otherwise the enumeration accumulates
/// in extended-precision reals and `exact_rational` is false.
struct ExactResult {
  bool exact_rational = false;
  BigRational p_connected_q;
  BigRational e_y_q;
  BigRational p_y_zero_q;
  double p_connected = 0.0;
  double e_y = 0.0;
  double p_y_zero = 0.0;
  std::uint64_t state_count = 0;
};

/// Enumeration budget: total selection configurations across all class
/// assignments.
inline constexpr std::uint64_t kMaxOracleStates = 100'000'000;

/// Number of states exact_connectivity would visit, i.e.
/// (sum_i C(n-1,K_i))^n. Saturates at 2^64-1.
std::uint64_t oracle_state_count(const ModelParams& params);

/// Exact connectivity probability, E[Y], and P[Y=0] by exhaustive
/// enumeration. Throws OracleError when the state count exceeds the budget.
ExactResult exact_connectivity(const ModelParams& params);

}  // namespace kout
