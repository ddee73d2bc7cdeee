// trgg : typed random geometric graph simulator and rate-function toolkit.
//
// Subcommands: sample, measure, rates, rates-sweep, mc-isolated, mc-degree,
// coupling. Exit codes: 0 success, 2 configuration error, 3 infeasible
// request.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "trgg/allocation.hpp"
#include "trgg/errors.hpp"
#include "trgg/graph.hpp"
#include "trgg/harness.hpp"
#include "trgg/measures.hpp"
#include "trgg/models.hpp"
#include "trgg/rates.hpp"
#include "trgg/rng.hpp"
#include "trgg/table.hpp"
#include "trgg/version.hpp"

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw trgg::ConfigError("config: cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw trgg::ConfigError("config: invalid JSON in '" + path + "': " + e.what());
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string plot_stem(const std::string& out_path) {
  const auto dot = out_path.find_last_of('.');
  const auto slash = out_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out_path;
  return out_path.substr(0, dot);
}

trgg::TypeAlphabet alphabet_from_config(const json& cfg) {
  if (cfg.contains("alphabet"))
    return trgg::TypeAlphabet(cfg.at("alphabet").get<std::vector<std::string>>());
  return trgg::TypeAlphabet::untyped();
}

// "pair_counts": [["a","b",count], ...] with unordered pairs.
trgg::PairMeasure pair_measure_from_config(const trgg::TypeAlphabet& alphabet, const json& entries,
                                           std::uint64_t n) {
  const std::size_t m = alphabet.size();
  std::vector<std::uint64_t> counts(m * m, 0);
  for (const auto& entry : entries) {
    const auto a = alphabet.index(entry.at(0).get<std::string>());
    const auto b = alphabet.index(entry.at(1).get<std::string>());
    const auto c = entry.at(2).get<std::uint64_t>();
    counts[a * m + b] = c;
    counts[b * m + a] = c;
  }
  return trgg::make_pair_measure(alphabet, std::move(counts), n);
}

int run_sample(const json& cfg, std::uint64_t seed, const std::string& out,
               const std::string& edge_list_out) {
  const std::string model = cfg.at("model").get<std::string>();
  std::optional<trgg::TypedGraph> graph;
  if (model == "trgg") {
    trgg::ModelParams params;
    params.n = cfg.at("n").get<std::uint64_t>();
    params.dim = cfg.value("d", 2u);
    params.alphabet = alphabet_from_config(cfg);
    params.type_law = cfg.contains("nu") ? cfg.at("nu").get<std::vector<double>>()
                                         : std::vector<double>{1.0};
    for (const auto& row : cfg.at("lambda"))
      for (const auto& v : row) params.lambda.push_back(v.get<double>());
    params.torus = cfg.value("torus", false);
    params.seed = seed;
    graph = trgg::sample_trgg(params);
  } else if (model == "gnm") {
    trgg::Rng rng(seed);
    graph = trgg::sample_gnm_geometric(cfg.at("n").get<std::uint64_t>(), cfg.value("d", 2u),
                                       cfg.at("edges").get<std::uint64_t>(), rng);
  } else if (model == "conditional") {
    const auto alphabet = alphabet_from_config(cfg);
    std::vector<std::uint64_t> counts;
    for (const auto& symbol : alphabet.symbols())
      counts.push_back(cfg.at("type_counts").at(symbol).get<std::uint64_t>());
    const auto type_counts = trgg::make_type_measure(alphabet, std::move(counts));
    const auto budgets = pair_measure_from_config(alphabet, cfg.at("pair_counts"), type_counts.n);
    trgg::Rng rng(seed);
    graph = trgg::sample_conditional_trgg(type_counts, budgets, rng, cfg.value("d", 2u));
  } else {
    throw trgg::ConfigError("model: expected 'trgg', 'gnm' or 'conditional'");
  }
  write_output(out, graph->to_json());
  if (!edge_list_out.empty()) write_output(edge_list_out, graph->to_edge_list());
  return 0;
}

int run_measure(const json& cfg, const std::string& out) {
  std::string graph_text;
  if (cfg.contains("graph_json")) {
    graph_text = cfg.at("graph_json").dump();
  } else {
    std::ifstream in(cfg.at("graph").get<std::string>());
    if (!in) throw trgg::ConfigError("graph: cannot open graph file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    graph_text = buffer.str();
  }
  const trgg::TypedGraph graph = trgg::TypedGraph::from_json(graph_text);
  const auto type_measure = trgg::empirical_type_measure(graph);
  const auto pair_measure = trgg::empirical_pair_measure(graph);
  const auto locality = trgg::empirical_locality_measure(graph);
  const auto degrees = trgg::degree_distribution(locality);

  json result;
  result["type_measure"] = json::parse(type_measure.to_json());
  result["pair_measure"] = json::parse(pair_measure.to_json());
  result["locality_measure"] = json::parse(locality.to_json());
  result["degree_distribution"] = json::parse(degrees.to_json());
  result["consistent"] = trgg::check_consistency(pair_measure, locality, cfg.value("tol", 0.0));
  write_output(out, result.dump());
  return 0;
}

json rate_to_json(const trgg::RateEvaluation& eval) {
  json out;
  out["feasible"] = eval.feasible;
  out["value"] = eval.feasible ? json(eval.value) : json("inf");
  if (eval.alpha) out["alpha"] = *eval.alpha;
  out["truncation_error"] = eval.truncation_error;
  return out;
}

int run_rates(const json& cfg, const std::string& out) {
  const std::string which = cfg.at("which").get<std::string>();
  trgg::RateEvaluation eval;
  if (which == "detached") {
    eval = trgg::detached_rate(cfg.at("y").get<double>(), cfg.at("d").get<std::uint32_t>(),
                               cfg.at("t").get<double>());
  } else if (which == "degree") {
    std::map<std::uint64_t, double> delta;
    for (const auto& entry : cfg.at("delta"))
      delta[entry.at(0).get<std::uint64_t>()] = entry.at(1).get<double>();
    eval = trgg::degree_rate(delta, cfg.at("d").get<std::uint32_t>(), cfg.at("t").get<double>());
  } else if (which == "locality") {
    const auto alphabet = alphabet_from_config(cfg);
    const std::size_t m = alphabet.size();
    const auto type_law = cfg.at("type_law").get<std::vector<double>>();
    std::vector<double> omega;
    for (const auto& row : cfg.at("omega"))
      for (const auto& v : row) omega.push_back(v.get<double>());
    if (omega.size() != m * m) throw trgg::ConfigError("omega: expected an m*m matrix");
    trgg::LocalityDistribution ell;
    for (const auto& entry : cfg.at("ell")) {
      trgg::LocalityCell cell;
      cell.type = alphabet.index(entry.at(0).get<std::string>());
      cell.sigma = entry.at(1).get<std::vector<std::uint32_t>>();
      ell[cell] += entry.at(2).get<double>();
    }
    eval = trgg::locality_rate(alphabet, type_law, omega, ell);
  } else {
    throw trgg::ConfigError("which: expected 'locality', 'degree' or 'detached'");
  }
  write_output(out, rate_to_json(eval).dump());
  return 0;
}

int run_experiment_command(trgg::ExperimentKind kind, const json& cfg_json,
                           std::optional<std::uint64_t> seed_override,
                           std::optional<unsigned> threads_override, const std::string& out,
                           const std::string& format_name, bool emit_plot_data) {
  json cfg = cfg_json;
  cfg["kind"] = trgg::experiment_kind_name(kind);
  if (seed_override) cfg["seed"] = *seed_override;
  auto config = trgg::ExperimentConfig::from_json(cfg);
  if (threads_override) config.threads = *threads_override;

  const trgg::ResultTable table = trgg::run_experiment(config);
  const auto format = trgg::parse_table_format(format_name);
  write_output(out, trgg::emit_results(table, format));

  if (emit_plot_data) {
    if (out.empty())
      throw trgg::ConfigError("out: --emit-plot-data requires --out to derive file names");
    const std::string stem = plot_stem(out);
    for (const auto& [name, content] : trgg::plot_series(config, table))
      write_output(stem + "." + name + ".dat", content);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typed random geometric graph simulator and rate-function toolkit"};
  app.set_version_flag("--version", trgg::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_name = "csv";
  std::string edge_list_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<unsigned> threads_override;
  bool emit_plot_data = false;

  auto add_common = [&](CLI::App* cmd, bool table_output) {
    cmd->add_option("--config", config_path, "JSON configuration file")->required();
    cmd->add_option("--out", out_path, "Output path (stdout when omitted)");
    cmd->add_option("--seed", seed_override, "Override the configured master seed");
    if (table_output) {
      cmd->add_option("--format", format_name, "Output format: csv or json");
      cmd->add_option("--threads", threads_override, "Worker thread count (0 = hardware)");
      cmd->add_flag("--emit-plot-data", emit_plot_data, "Write (x,y) series files next to --out");
    }
  };

  auto* sample = app.add_subcommand("sample", "Sample a graph and write it as JSON");
  add_common(sample, false);
  sample->add_option("--edge-list", edge_list_path, "Also write a plain text edge list");

  auto* measure = app.add_subcommand("measure", "Compute the empirical measures of a graph");
  add_common(measure, false);

  auto* rates = app.add_subcommand("rates", "Evaluate a rate function from JSON inputs");
  add_common(rates, false);

  auto* mc_isolated = app.add_subcommand("mc-isolated", "Detached-node rare event estimation");
  add_common(mc_isolated, true);
  auto* mc_degree = app.add_subcommand("mc-degree", "Degree distribution Monte Carlo");
  add_common(mc_degree, true);
  auto* coupling = app.add_subcommand("coupling", "Allocation coupling experiment");
  add_common(coupling, true);
  auto* sweep = app.add_subcommand("rates-sweep", "Tabulate the detached-node rate over a y grid");
  add_common(sweep, true);

  CLI11_PARSE(app, argc, argv);

  try {
    const json cfg = load_json_file(config_path);
    if (sample->parsed())
      return run_sample(cfg, seed_override.value_or(cfg.value("seed", 0ull)), out_path,
                        edge_list_path);
    if (measure->parsed()) return run_measure(cfg, out_path);
    if (rates->parsed()) return run_rates(cfg, out_path);
    if (mc_isolated->parsed())
      return run_experiment_command(trgg::ExperimentKind::mc_isolated, cfg, seed_override,
                                    threads_override, out_path, format_name, emit_plot_data);
    if (mc_degree->parsed())
      return run_experiment_command(trgg::ExperimentKind::mc_degree, cfg, seed_override,
                                    threads_override, out_path, format_name, emit_plot_data);
    if (coupling->parsed())
      return run_experiment_command(trgg::ExperimentKind::coupling, cfg, seed_override,
                                    threads_override, out_path, format_name, emit_plot_data);
    if (sweep->parsed())
      return run_experiment_command(trgg::ExperimentKind::rates_sweep, cfg, seed_override,
                                    threads_override, out_path, format_name, emit_plot_data);
  } catch (const trgg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const trgg::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
