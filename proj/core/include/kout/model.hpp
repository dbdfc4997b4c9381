#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace kout {

/// Absolute tolerance on |sum(mu) - 1|. Inputs are human-entered decimals,
/// so an exact sum cannot be demanded.
inline constexpr double kMuSumTolerance = 1e-12;

enum class ValidationCode {
  empty_classes,
  non_positive_mu,
  mu_sum_not_one,
  length_mismatch,
  non_positive_k,
  non_monotone_k,
  k_not_below_n,
  n_too_small,
  n_too_large,
  malformed_document,
};

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ValidationCode code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}
  ValidationCode code() const noexcept { return code_; }

 private:
  ValidationCode code_;
};

/// Class membership distribution mu = (mu_1, ..., mu_r). Entries are strictly
/// positive and sum to 1; r is fixed and does not scale with the node count.
/// Class indices are 0-based internally and 1-based in user-facing output.
struct ClassDistribution {
  std::vector<double> probs;

  std::size_t size() const noexcept { return probs.size(); }
};

/// Per-class selection counts K_1 <= K_2 <= ... <= K_r, with K_r < n once
/// paired with a node count.
struct KScaling {
  std::vector<std::int64_t> ks;

  std::size_t size() const noexcept { return ks.size(); }
};

/// Full parameterization of the graph model: node count, class distribution,
/// and selection counts. Immutable after validation; safe to share across
/// threads.
struct ModelParams {
  std::int64_t n = 0;
  ClassDistribution dist;
  KScaling scaling;

  std::size_t r() const noexcept { return dist.size(); }
};

/// Checks every type invariant and returns the params unchanged, or throws
/// ValidationError with a distinct code per failure mode.
const ModelParams& validate(const ModelParams& params);

/// Expected selections per node, sum_i mu_i * K_i. Lies in [K_1, K_r].
double k_avg(const ModelParams& params);

/// Total probability of the first r-1 classes; 0 when r == 1.
double mu_tilde(const ClassDistribution& dist);
double mu_tilde(const ModelParams& params);

/// JSON contract: keys "n" (integer), "mu" (array of reals), "k" (array of
/// integers). The result is validated before being returned.
ModelParams params_from_json(const nlohmann::json& doc);
nlohmann::json params_to_json(const ModelParams& params);

}  // namespace kout
