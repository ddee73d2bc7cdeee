#pragma once

// Experiment orchestration: seeded parallel Monte Carlo with deterministic
// tabular output. Replica k always draws from the stream derived from
// (master seed, k), and replica results are merged in index order, so a run
// is byte-identical for any thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trgg/alphabet.hpp"
#include "trgg/measures.hpp"
#include "trgg/table.hpp"

namespace trgg {

enum class ExperimentKind { mc_isolated, mc_degree, coupling, rates_sweep };

std::string experiment_kind_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::mc_isolated;
  std::vector<std::uint64_t> n_values;
  std::uint32_t dim = 2;
  std::optional<double> t;            // radius intensity; edge budgets scale as n*rho(d)*t/2
  std::optional<double> mean_degree;  // alternative pin: edge budgets scale as n*mean_degree/2
  std::optional<std::uint64_t> edge_count;  // absolute edge count (mc-degree only)
  TypeAlphabet alphabet;
  std::vector<double> nu;      // type law (coupling)
  std::vector<double> lambda;  // m*m intensity matrix (coupling)
  bool torus = false;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;
  std::vector<double> y_values;
  double threshold = 5.0;  // Bennett deviation threshold (coupling)
  unsigned threads = 0;    // 0 = hardware concurrency; execution detail, never echoed

  // Throws ConfigError naming the offending field.
  static ExperimentConfig from_json(const nlohmann::json& j);
  // Echo of the semantic fields only; two configs that produce the same
  // table have the same echo.
  nlohmann::json semantic_echo() const;
};

ResultTable run_mc_isolated(const ExperimentConfig& config);
ResultTable run_mc_degree(const ExperimentConfig& config);
ResultTable run_coupling_experiment(const ExperimentConfig& config);
ResultTable run_rates_sweep(const ExperimentConfig& config);
ResultTable run_experiment(const ExperimentConfig& config);

// Deterministic apportionment of continuous targets to integer counts:
// largest-remainder for the type counts, floor with a feasibility clamp for
// the pair budgets derived from omega(a,b) = rho(dim) lambda(a,b) nu(a) nu(b).
std::pair<TypeMeasure, PairMeasure> integralize_targets(const TypeAlphabet& alphabet,
                                                        const std::vector<double>& nu,
                                                        const std::vector<double>& lambda,
                                                        std::uint64_t n, std::uint32_t dim);

// Runs body(0..count-1) on a worker pool. Workers claim indices from a
// shared counter and must write only to their own index's slot.
void parallel_for_indices(std::uint64_t count, unsigned threads,
                          const std::function<void(std::uint64_t)>& body);

// Named (x, y) series extracted from an experiment table, as
// (name, file content) pairs, for external plotting.
std::vector<std::pair<std::string, std::string>> plot_series(const ExperimentConfig& config,
                                                             const ResultTable& table);

}  // namespace trgg
