#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kout/model.hpp"
#include "kout/theory.hpp"

namespace kout {

/// Which aggregates a run should produce. Connectivity, Y statistics, and
/// edge counts are cheap and on by default; the component-size histogram is
/// opt-in.
struct OutputSelection {
  bool connectivity = true;
  bool y_stats = true;
  bool edge_count = true;
  bool component_histogram = false;
};

/// A Monte Carlo protocol: one or more parameterizations (a sweep), a trial
/// count per configuration, and the master seed that pins the whole run.
struct ExperimentConfig {
  std::vector<ModelParams> configurations;
  std::uint64_t trials = 10'000;  // desk-scale default
  std::uint64_t master_seed = 0;
  double confidence_level = 0.95;
  OutputSelection outputs;
};

/// Aggregates for one configuration. Counts are exact integers; derived
/// real-valued fields are computed once from them, so results do not depend
/// on worker count or scheduling.
struct ExperimentResult {
  ModelParams params;
  std::uint64_t config_index = 0;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;

  std::uint64_t connected_count = 0;
  std::uint64_t y_zero_count = 0;
  double empirical_p_connected = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_y = 0.0;
  double y_sample_var = 0.0;
  double empirical_p_y_zero = 0.0;
  double mean_edges = 0.0;
  double edges_sample_var = 0.0;
  std::map<std::int64_t, std::uint64_t> component_histogram;  // size -> count

  BoundReport bounds;
};

/// Standard normal quantile (Acklam's rational approximation plus one Halley
/// refinement; relative error far below the Monte Carlo tolerances here).
double normal_quantile(double p);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile
/// z; well behaved when the empirical probability sits at 0 or 1.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// Worker threads used by run(): KOUT_THREADS when set to a positive
/// integer, otherwise the hardware concurrency. Affects speed only.
unsigned worker_count();

/// Executes the protocol. Trial `t` of configuration `c` draws its generator
/// from (master_seed, c*trials + t), making the result independent of how
/// trials are scheduled across workers.
std::vector<ExperimentResult> run(const ExperimentConfig& config);

/// Config document: keys n/mu/k as in the parameter contract, plus trials,
/// master_seed, confidence_level, outputs (array of output names), and
/// either kr_range {"from","to"} (varies the last k entry) or n_list.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

/// CSV schema (one row per configuration, '.' decimal, no locale):
/// n,mu,k,trials,seed,p_connected,ci_low,ci_high,mean_y,p_y_zero,
/// upper_bound,lower_bound,lower_bound_valid,second_moment_bound,union_bound
/// mu and k are semicolon-joined. Undefined bounds render as empty cells.
void write_csv(std::ostream& out, std::span<const ExperimentResult> results);

nlohmann::json result_to_json(const ExperimentResult& result);
nlohmann::json results_to_json(std::span<const ExperimentResult> results);

}  // namespace kout
