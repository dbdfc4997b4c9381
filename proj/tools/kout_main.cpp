// Command-line front end: simulate | sweep | bounds | kstar | oracle | figure1.
// Data goes to stdout or --out; progress and errors go to stderr.
// Exit codes: 0 success, 1 validation/usage error, 2 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kout/experiment.hpp"
#include "kout/model.hpp"
#include "kout/oracle.hpp"
#include "kout/sampler.hpp"
#include "kout/theory.hpp"

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list, got '" + csv + "'");
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list, got '" + csv + "'");
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file: " + path);
  file << content;
  if (!file) throw IoError("failed writing output file: " + path);
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    file >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return doc;
}

// Flags shared by the sampling subcommands; values override the config file.
struct ParamFlags {
  std::optional<std::int64_t> n;
  std::optional<std::string> mu;
  std::optional<std::string> k;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> confidence;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags, bool with_trials) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--n", flags.n, "node count");
  cmd->add_option("--mu", flags.mu, "class probabilities, comma-separated");
  cmd->add_option("--k", flags.k, "per-class selection counts, comma-separated");
  if (with_trials) {
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials per configuration");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--confidence", flags.confidence, "confidence level (default 0.95)");
  }
  cmd->add_option("--out", flags.out_path, "output path (default: stdout)");
  cmd->add_option("--format", flags.format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
}

// Merge file config (if any) with flag overrides into one JSON document.
nlohmann::json merged_config_doc(const ParamFlags& flags) {
  nlohmann::json doc = nlohmann::json::object();
  if (!flags.config_path.empty()) doc = load_json_file(flags.config_path);
  if (flags.n) doc["n"] = *flags.n;
  if (flags.mu) doc["mu"] = parse_doubles(*flags.mu);
  if (flags.k) doc["k"] = parse_ints(*flags.k);
  if (flags.trials) doc["trials"] = *flags.trials;
  if (flags.seed) doc["master_seed"] = *flags.seed;
  if (flags.confidence) doc["confidence_level"] = *flags.confidence;
  if (!doc.contains("n") || !doc.contains("mu") || !doc.contains("k")) {
    throw std::invalid_argument("model parameters required: provide --config or --n/--mu/--k");
  }
  return doc;
}

std::string render_results(const std::vector<kout::ExperimentResult>& results,
                           const std::string& format, bool single) {
  if (format == "csv") {
    std::ostringstream oss;
    kout::write_csv(oss, results);
    return oss.str();
  }
  const nlohmann::json j = single && results.size() == 1 ? kout::result_to_json(results[0])
                                                         : kout::results_to_json(results);
  return j.dump(2) + "\n";
}

int run_simulate(const ParamFlags& flags, const std::string& dump_path) {
  nlohmann::json doc = merged_config_doc(flags);
  doc.erase("kr_range");
  doc.erase("n_list");
  kout::ExperimentConfig config = kout::experiment_config_from_json(doc);
  if (!dump_path.empty()) {
    const kout::KOutGraph g =
        kout::build_graph(config.configurations[0], {config.master_seed, 0});
    std::ostringstream oss;
    kout::write_dump(oss, g);
    write_output(dump_path, oss.str());
  }
  const auto results = kout::run(config);
  write_output(flags.out_path, render_results(results, flags.format, /*single=*/true));
  return 0;
}

int run_sweep(const ParamFlags& flags, std::optional<std::int64_t> kr_from,
              std::optional<std::int64_t> kr_to, const std::optional<std::string>& n_list,
              const std::string& format) {
  nlohmann::json doc = merged_config_doc(flags);
  if (kr_from || kr_to) {
    if (!kr_from || !kr_to) throw std::invalid_argument("--kr-from and --kr-to go together");
    doc.erase("n_list");
    doc["kr_range"] = {{"from", *kr_from}, {"to", *kr_to}};
  }
  if (n_list) {
    doc.erase("kr_range");
    doc["n_list"] = parse_ints(*n_list);
  }
  kout::ExperimentConfig config = kout::experiment_config_from_json(doc);
  std::cerr << "sweep: " << config.configurations.size() << " configuration(s), "
            << config.trials << " trials each\n";
  const auto results = kout::run(config);
  write_output(flags.out_path, render_results(results, format, /*single=*/false));
  return 0;
}

int run_bounds(const ParamFlags& flags) {
  const nlohmann::json doc = merged_config_doc(flags);
  const kout::ModelParams params = kout::params_from_json(doc);
  const kout::BoundReport report = kout::bound_report(params);
  write_output(flags.out_path, kout::bound_report_to_json(report).dump(2) + "\n");
  return 0;
}

int run_kstar(const std::string& mu_tilde_list, const std::string& out_path) {
  const std::vector<double> values = parse_doubles(mu_tilde_list);
  std::ostringstream oss;
  oss << "mu_tilde,k_star\n";
  for (const double mt : values) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", mt);
    oss << buf << ',' << kout::k_star(mt) << '\n';
  }
  write_output(out_path, oss.str());
  return 0;
}

nlohmann::json rational_to_json(const kout::BigRational& q, double value) {
  return nlohmann::json{
      {"numerator", boost::multiprecision::numerator(q).str()},
      {"denominator", boost::multiprecision::denominator(q).str()},
      {"value", value},
  };
}

int run_oracle(const ParamFlags& flags) {
  const nlohmann::json doc = merged_config_doc(flags);
  const kout::ModelParams params = kout::params_from_json(doc);
  const kout::ExactResult res = kout::exact_connectivity(params);
  nlohmann::json j{
      {"exact_rational", res.exact_rational},
      {"state_count", res.state_count},
  };
  if (res.exact_rational) {
    j["p_connected"] = rational_to_json(res.p_connected_q, res.p_connected);
    j["e_y"] = rational_to_json(res.e_y_q, res.e_y);
    j["p_y_zero"] = rational_to_json(res.p_y_zero_q, res.p_y_zero);
  } else {
    j["p_connected"] = res.p_connected;
    j["e_y"] = res.e_y;
    j["p_y_zero"] = res.p_y_zero;
  }
  write_output(flags.out_path, j.dump(2) + "\n");
  return 0;
}

int run_figure1(std::uint64_t trials, std::uint64_t seed, const std::string& out_path,
                const std::string& format) {
  kout::ExperimentConfig config;
  config.trials = trials;
  config.master_seed = seed;
  for (std::int64_t k3 = 3; k3 <= 20; ++k3) {
    kout::ModelParams p;
    p.n = 1000;
    p.dist.probs = {0.9, 0.06, 0.04};
    p.scaling.ks = {1, 2, k3};
    config.configurations.push_back(std::move(p));
  }
  std::cerr << "figure1: 18 configurations, " << trials << " trials each\n";
  const auto results = kout::run(config);
  write_output(out_path, render_results(results, format, /*single=*/false));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inhomogeneous random K-out graphs: sampling, connectivity bounds, experiments"};
  app.require_subcommand(1);

  ParamFlags sim_flags;
  std::string sim_dump;
  CLI::App* simulate = app.add_subcommand("simulate", "run one configuration, emit aggregates");
  add_param_flags(simulate, sim_flags, /*with_trials=*/true);
  simulate->add_option("--dump-graph", sim_dump, "write trial 0's graph in kout v1 dump format");

  ParamFlags sweep_flags;
  sweep_flags.format = "csv";
  std::optional<std::int64_t> kr_from, kr_to;
  std::optional<std::string> sweep_n_list;
  CLI::App* sweep = app.add_subcommand("sweep", "run a K_r or n sweep, emit one row per point");
  add_param_flags(sweep, sweep_flags, /*with_trials=*/true);
  sweep->add_option("--kr-from", kr_from, "first K_r value (varies the last k entry)");
  sweep->add_option("--kr-to", kr_to, "last K_r value");
  sweep->add_option("--n-list", sweep_n_list, "node counts, comma-separated");

  ParamFlags bounds_flags;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate all closed-form bounds, no sampling");
  add_param_flags(bounds, bounds_flags, /*with_trials=*/false);

  std::string kstar_list;
  std::string kstar_out;
  CLI::App* kstar = app.add_subcommand("kstar", "smallest K_r making the lower bound non-trivial");
  kstar->add_option("--mu-tilde", kstar_list, "mu_tilde values, comma-separated")->required();
  kstar->add_option("--out", kstar_out, "output path (default: stdout)");

  ParamFlags oracle_flags;
  CLI::App* oracle = app.add_subcommand("oracle", "exact probabilities by total enumeration");
  add_param_flags(oracle, oracle_flags, /*with_trials=*/false);

  std::uint64_t fig_trials = 10'000;
  std::uint64_t fig_seed = 1;
  std::string fig_out;
  std::string fig_format = "csv";
  CLI::App* figure1 = app.add_subcommand("figure1", "canned n=1000 three-class K_3 sweep");
  figure1->add_option("--trials", fig_trials, "trials per point (paper protocol: 100000)");
  figure1->add_option("--seed", fig_seed, "master seed");
  figure1->add_option("--out", fig_out, "output path (default: stdout)");
  figure1->add_option("--format", fig_format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_flags, sim_dump);
    if (sweep->parsed()) {
      return run_sweep(sweep_flags, kr_from, kr_to, sweep_n_list, sweep_flags.format);
    }
    if (bounds->parsed()) return run_bounds(bounds_flags);
    if (kstar->parsed()) return run_kstar(kstar_list, kstar_out);
    if (oracle->parsed()) return run_oracle(oracle_flags);
    if (figure1->parsed()) return run_figure1(fig_trials, fig_seed, fig_out, fig_format);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
