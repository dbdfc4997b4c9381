#include "kout/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "kout/analysis.hpp"
#include "kout/sampler.hpp"

namespace kout {

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string join_semicolon(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += fmt_double(xs[i]);
  }
  return out;
}

std::string join_semicolon(const std::vector<std::int64_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(xs[i]);
  }
  return out;
}

struct TrialAccumulator {
  std::uint64_t connected = 0;
  std::uint64_t y_sum = 0;
  std::uint64_t y_sq_sum = 0;
  std::uint64_t y_zero = 0;
  std::uint64_t edge_sum = 0;
  std::uint64_t edge_sq_sum = 0;
  std::map<std::int64_t, std::uint64_t> histogram;

  void merge(const TrialAccumulator& other) {
    connected += other.connected;
    y_sum += other.y_sum;
    y_sq_sum += other.y_sq_sum;
    y_zero += other.y_zero;
    edge_sum += other.edge_sum;
    edge_sq_sum += other.edge_sq_sum;
    for (const auto& [size, count] : other.histogram) histogram[size] += count;
  }
};

double sample_variance(std::uint64_t sum, std::uint64_t sq_sum, std::uint64_t count) {
  if (count < 2) return 0.0;
  const auto c = static_cast<double>(count);
  const double mean = static_cast<double>(sum) / c;
  const double centered = static_cast<double>(sq_sum) - c * mean * mean;
  return std::max(0.0, centered / (c - 1.0));
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile requires p in (0,1)");
  }
  // Acklam's coefficients.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against erfc.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const auto t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (p + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

unsigned worker_count() {
  if (const char* env = std::getenv("KOUT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<ExperimentResult> run(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.configurations.empty()) {
    throw std::invalid_argument("experiment needs at least one configuration");
  }
  if (!(config.confidence_level > 0.0 && config.confidence_level < 1.0)) {
    throw std::invalid_argument("confidence_level must be in (0,1)");
  }
  for (const ModelParams& p : config.configurations) validate(p);

  const double z = normal_quantile(1.0 - (1.0 - config.confidence_level) / 2.0);
  const unsigned workers = std::max(1u, worker_count());

  std::vector<ExperimentResult> results;
  results.reserve(config.configurations.size());

  for (std::size_t ci = 0; ci < config.configurations.size(); ++ci) {
    const ModelParams& params = config.configurations[ci];
    const std::uint64_t trials = config.trials;
    const std::uint64_t base_trial = static_cast<std::uint64_t>(ci) * trials;

    std::vector<TrialAccumulator> partials(workers);
    auto work = [&](unsigned w) {
      TrialAccumulator& acc = partials[w];
      const std::uint64_t lo = trials * w / workers;
      const std::uint64_t hi = trials * (w + 1) / workers;
      for (std::uint64_t t = lo; t < hi; ++t) {
        const SeedSpec seed{config.master_seed, base_trial + t};
        const KOutGraph graph = build_graph(params, seed);
        const ComponentCensus c = census(graph);
        acc.connected += c.connected ? 1 : 0;
        const auto y = static_cast<std::uint64_t>(c.y_count);
        acc.y_sum += y;
        acc.y_sq_sum += y * y;
        acc.y_zero += y == 0 ? 1 : 0;
        const std::uint64_t edges = graph.edge_count();
        acc.edge_sum += edges;
        acc.edge_sq_sum += edges * edges;
        if (config.outputs.component_histogram) {
          for (const std::int64_t s : c.component_sizes) ++acc.histogram[s];
        }
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (std::thread& th : pool) th.join();
    }

    TrialAccumulator total;
    for (const TrialAccumulator& acc : partials) total.merge(acc);

    ExperimentResult res;
    res.params = params;
    res.config_index = ci;
    res.trials = trials;
    res.master_seed = config.master_seed;
    res.connected_count = total.connected;
    res.y_zero_count = total.y_zero;
    res.empirical_p_connected = static_cast<double>(total.connected) / static_cast<double>(trials);
    const WilsonInterval ci_bounds = wilson_interval(total.connected, trials, z);
    res.ci_low = ci_bounds.low;
    res.ci_high = ci_bounds.high;
    res.mean_y = static_cast<double>(total.y_sum) / static_cast<double>(trials);
    res.y_sample_var = sample_variance(total.y_sum, total.y_sq_sum, trials);
    res.empirical_p_y_zero = static_cast<double>(total.y_zero) / static_cast<double>(trials);
    res.mean_edges = static_cast<double>(total.edge_sum) / static_cast<double>(trials);
    res.edges_sample_var = sample_variance(total.edge_sum, total.edge_sq_sum, trials);
    res.component_histogram = std::move(total.histogram);
    res.bounds = bound_report(params);
    results.push_back(std::move(res));
  }
  return results;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
  ExperimentConfig config;
  ModelParams base = params_from_json(doc);

  if (doc.contains("trials")) config.trials = doc.at("trials").get<std::uint64_t>();
  if (doc.contains("master_seed")) config.master_seed = doc.at("master_seed").get<std::uint64_t>();
  if (doc.contains("confidence_level")) {
    config.confidence_level = doc.at("confidence_level").get<double>();
  }
  if (doc.contains("outputs")) {
    OutputSelection sel;
    sel.connectivity = sel.y_stats = sel.edge_count = false;
    for (const auto& name : doc.at("outputs")) {
      const auto s = name.get<std::string>();
      if (s == "connectivity") {
        sel.connectivity = true;
      } else if (s == "y_stats") {
        sel.y_stats = true;
      } else if (s == "edge_count") {
        sel.edge_count = true;
      } else if (s == "component_histogram") {
        sel.component_histogram = true;
      } else {
        throw std::invalid_argument("unknown output selection: " + s);
      }
    }
    config.outputs = sel;
  }

  const bool has_kr = doc.contains("kr_range");
  const bool has_nl = doc.contains("n_list");
  if (has_kr && has_nl) {
    throw std::invalid_argument("config may sweep kr_range or n_list, not both");
  }
  if (has_kr) {
    const auto& range = doc.at("kr_range");
    const auto from = range.at("from").get<std::int64_t>();
    const auto to = range.at("to").get<std::int64_t>();
    if (to < from) throw std::invalid_argument("kr_range: to < from");
    for (std::int64_t kr = from; kr <= to; ++kr) {
      ModelParams p = base;
      p.scaling.ks.back() = kr;
      validate(p);
      config.configurations.push_back(std::move(p));
    }
  } else if (has_nl) {
    for (const auto& nv : doc.at("n_list")) {
      ModelParams p = base;
      p.n = nv.get<std::int64_t>();
      validate(p);
      config.configurations.push_back(std::move(p));
    }
  } else {
    config.configurations.push_back(std::move(base));
  }
  return config;
}

void write_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "n,mu,k,trials,seed,p_connected,ci_low,ci_high,mean_y,p_y_zero,"
         "upper_bound,lower_bound,lower_bound_valid,second_moment_bound,union_bound\n";
  for (const ExperimentResult& r : results) {
    out << r.params.n << ',' << join_semicolon(r.params.dist.probs) << ','
        << join_semicolon(r.params.scaling.ks) << ',' << r.trials << ',' << r.master_seed << ','
        << fmt_double(r.empirical_p_connected) << ',' << fmt_double(r.ci_low) << ','
        << fmt_double(r.ci_high) << ',' << fmt_double(r.mean_y) << ','
        << fmt_double(r.empirical_p_y_zero) << ',' << fmt_double(r.bounds.upper_bound_asymptotic)
        << ',';
    if (r.bounds.lower_bound_one_law) out << fmt_double(*r.bounds.lower_bound_one_law);
    out << ',' << (r.bounds.lower_bound_valid ? 1 : 0) << ',';
    if (r.bounds.second_moment_upper_bound) out << fmt_double(*r.bounds.second_moment_upper_bound);
    out << ',' << fmt_double(r.bounds.union_bound_disconnect) << '\n';
  }
}

nlohmann::json result_to_json(const ExperimentResult& result) {
  nlohmann::json j{
      {"params", params_to_json(result.params)},
      {"config_index", result.config_index},
      {"trials", result.trials},
      {"master_seed", result.master_seed},
      {"connected_count", result.connected_count},
      {"empirical_p_connected", result.empirical_p_connected},
      {"ci_low", result.ci_low},
      {"ci_high", result.ci_high},
      {"mean_y", result.mean_y},
      {"y_sample_var", result.y_sample_var},
      {"empirical_p_y_zero", result.empirical_p_y_zero},
      {"mean_edges", result.mean_edges},
      {"edges_sample_var", result.edges_sample_var},
      {"bounds", bound_report_to_json(result.bounds)},
  };
  if (!result.component_histogram.empty()) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [size, count] : result.component_histogram) {
      hist[std::to_string(size)] = count;
    }
    j["component_histogram"] = hist;
  }
  return j;
}

nlohmann::json results_to_json(std::span<const ExperimentResult> results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ExperimentResult& r : results) arr.push_back(result_to_json(r));
  return arr;
}

}  // namespace kout
