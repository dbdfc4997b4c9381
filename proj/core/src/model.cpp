#include "kout/model.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace kout {

namespace {

// Internal node ids are 32-bit.
constexpr std::int64_t kMaxNodes = std::numeric_limits<std::int32_t>::max();

[[noreturn]] void fail(ValidationCode code, const std::string& msg) {
  throw ValidationError(code, msg);
}

}  // namespace

const ModelParams& validate(const ModelParams& params) {
  if (params.n < 2) {
    fail(ValidationCode::n_too_small, "node count must be at least 2, got " + std::to_string(params.n));
  }
  if (params.n > kMaxNodes) {
    fail(ValidationCode::n_too_large, "node count exceeds supported maximum " + std::to_string(kMaxNodes));
  }
  if (params.dist.size() == 0) {
    fail(ValidationCode::empty_classes, "class distribution must have at least one class");
  }
  if (params.dist.size() != params.scaling.size()) {
    fail(ValidationCode::length_mismatch,
         "mu has " + std::to_string(params.dist.size()) + " classes but k has " +
             std::to_string(params.scaling.size()));
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < params.dist.size(); ++i) {
    const double p = params.dist.probs[i];
    if (!std::isfinite(p) || p <= 0.0) {
      fail(ValidationCode::non_positive_mu,
           "mu[" + std::to_string(i + 1) + "] must be strictly positive, got " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kMuSumTolerance) {
    fail(ValidationCode::mu_sum_not_one, "mu entries sum to " + std::to_string(sum) + ", expected 1");
  }

  for (std::size_t i = 0; i < params.scaling.size(); ++i) {
    const std::int64_t k = params.scaling.ks[i];
    if (k < 1) {
      fail(ValidationCode::non_positive_k,
           "k[" + std::to_string(i + 1) + "] must be a positive integer, got " + std::to_string(k));
    }
    if (i > 0 && k < params.scaling.ks[i - 1]) {
      fail(ValidationCode::non_monotone_k,
           "k must be nondecreasing; k[" + std::to_string(i + 1) + "] = " + std::to_string(k) +
               " < k[" + std::to_string(i) + "] = " + std::to_string(params.scaling.ks[i - 1]));
    }
  }
  if (params.scaling.ks.back() >= params.n) {
    fail(ValidationCode::k_not_below_n,
         "largest k = " + std::to_string(params.scaling.ks.back()) + " must be smaller than n = " +
             std::to_string(params.n));
  }
  return params;
}

double k_avg(const ModelParams& params) {
  double acc = 0.0;
  for (std::size_t i = 0; i < params.r(); ++i) {
    acc += params.dist.probs[i] * static_cast<double>(params.scaling.ks[i]);
  }
  return acc;
}

double mu_tilde(const ClassDistribution& dist) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) acc += dist.probs[i];
  return acc;
}

double mu_tilde(const ModelParams& params) { return mu_tilde(params.dist); }

ModelParams params_from_json(const nlohmann::json& doc) {
  ModelParams p;
  try {
    p.n = doc.at("n").get<std::int64_t>();
    p.dist.probs = doc.at("mu").get<std::vector<double>>();
    p.scaling.ks = doc.at("k").get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(ValidationCode::malformed_document,
                          std::string("malformed parameter document: ") + e.what());
  }
  validate(p);
  return p;
}

nlohmann::json params_to_json(const ModelParams& params) {
  return nlohmann::json{{"n", params.n}, {"mu", params.dist.probs}, {"k", params.scaling.ks}};
}

}  // namespace kout
