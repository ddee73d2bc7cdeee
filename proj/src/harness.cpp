#include "trgg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "trgg/allocation.hpp"
#include "trgg/errors.hpp"
#include "trgg/graph.hpp"
#include "trgg/models.hpp"
#include "trgg/rates.hpp"
#include "trgg/rng.hpp"
#include "trgg/version.hpp"

namespace trgg {

namespace {

using Cell = ResultTable::Cell;

ExperimentKind parse_kind(const std::string& name) {
  if (name == "mc-isolated") return ExperimentKind::mc_isolated;
  if (name == "mc-degree") return ExperimentKind::mc_degree;
  if (name == "coupling") return ExperimentKind::coupling;
  if (name == "rates-sweep") return ExperimentKind::rates_sweep;
  throw ConfigError("kind: unknown experiment kind '" + name + "'");
}

// The mean-degree scale of the edge budget: rho(d) * t, or the explicit pin.
double resolve_mean_degree(const ExperimentConfig& config) {
  if (config.mean_degree) return *config.mean_degree;
  if (config.t) return unit_ball_volume(config.dim) * *config.t;
  throw ConfigError("t: experiment requires 't' or 'mean_degree'");
}

std::uint64_t edge_budget(const ExperimentConfig& config, std::uint64_t n) {
  if (config.edge_count) return *config.edge_count;
  const double target = static_cast<double>(n) * resolve_mean_degree(config) / 2.0;
  // llrint under the default rounding mode rounds half to even.
  return static_cast<std::uint64_t>(std::llrint(target));
}

Cell value_cell(double v) {
  if (!std::isfinite(v)) return Cell{format_double(v)};
  return Cell{v};
}

double tv_to_poisson(const std::map<std::uint64_t, std::uint64_t>& hist, std::uint64_t total,
                     double mu) {
  const double n = static_cast<double>(total);
  if (mu <= 0.0) {
    // Degenerate reference: point mass at zero.
    double sum = 0.0;
    double zero = 0.0;
    for (const auto& [k, c] : hist) {
      if (k == 0)
        zero = static_cast<double>(c) / n;
      else
        sum += static_cast<double>(c) / n;
    }
    return 0.5 * (std::abs(zero - 1.0) + sum);
  }
  const std::uint64_t max_degree = hist.empty() ? 0 : hist.rbegin()->first;
  double sum = 0.0;
  double cdf = 0.0;
  for (std::uint64_t k = 0; k <= max_degree; ++k) {
    const double q = poisson_pmf(mu, k);
    cdf += q;
    auto it = hist.find(k);
    const double p = it == hist.end() ? 0.0 : static_cast<double>(it->second) / n;
    sum += std::abs(p - q);
  }
  sum += std::max(0.0, 1.0 - cdf);  // reference mass beyond the observed range
  return 0.5 * sum;
}

double kl_to_poisson(const std::map<std::uint64_t, std::uint64_t>& hist, std::uint64_t total,
                     double mu) {
  const double n = static_cast<double>(total);
  if (mu <= 0.0) {
    for (const auto& [k, c] : hist)
      if (k != 0 && c > 0) return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  double h = 0.0;
  for (const auto& [k, c] : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h += p * (std::log(p) - log_poisson_pmf(mu, k));
  }
  return h;
}

std::string pair_label(const TypeAlphabet& alphabet, std::uint32_t a, std::uint32_t b) {
  return alphabet.symbol(a) + "-" + alphabet.symbol(b);
}

nlohmann::json base_metadata(const ExperimentConfig& config) {
  nlohmann::json meta;
  meta["config"] = config.semantic_echo();
  meta["seed"] = config.seed;
  meta["version"] = kVersion;
  return meta;
}

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::mc_isolated: return "mc-isolated";
    case ExperimentKind::mc_degree: return "mc-degree";
    case ExperimentKind::coupling: return "coupling";
    case ExperimentKind::rates_sweep: return "rates-sweep";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::vector<std::string> known = {
      "kind",  "n",       "d",        "t",       "mean_degree", "edge_count", "alphabet",
      "nu",    "lambda",  "torus",    "replicas", "seed",       "y",          "y_grid",
      "threshold", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError(it.key() + ": unknown field");
  }

  ExperimentConfig config;
  try {
    config.kind = parse_kind(j.at("kind").get<std::string>());
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("kind: missing or not a string");
  }

  auto get_field = [&](const char* name, auto parse) {
    try {
      parse();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(std::string(name) + ": malformed value");
    }
  };

  if (j.contains("n")) {
    get_field("n", [&] {
      if (j["n"].is_array())
        config.n_values = j["n"].get<std::vector<std::uint64_t>>();
      else
        config.n_values = {j["n"].get<std::uint64_t>()};
    });
    for (std::uint64_t n : config.n_values)
      if (n < 2) throw ConfigError("n: values must be at least 2");
  }
  if (j.contains("d")) get_field("d", [&] { config.dim = j["d"].get<std::uint32_t>(); });
  if (config.dim < 1) throw ConfigError("d: must be at least 1");
  if (j.contains("t")) {
    get_field("t", [&] { config.t = j["t"].get<double>(); });
    if (!(*config.t > 0.0)) throw ConfigError("t: must be positive");
  }
  if (j.contains("mean_degree")) {
    get_field("mean_degree", [&] { config.mean_degree = j["mean_degree"].get<double>(); });
    if (!(*config.mean_degree >= 0.0)) throw ConfigError("mean_degree: must be nonnegative");
  }
  if (j.contains("edge_count"))
    get_field("edge_count", [&] { config.edge_count = j["edge_count"].get<std::uint64_t>(); });
  if (j.contains("alphabet"))
    get_field("alphabet", [&] {
      config.alphabet = TypeAlphabet(j["alphabet"].get<std::vector<std::string>>());
    });
  if (j.contains("nu")) get_field("nu", [&] { config.nu = j["nu"].get<std::vector<double>>(); });
  if (j.contains("lambda"))
    get_field("lambda", [&] {
      std::vector<std::vector<double>> rows = j["lambda"].get<std::vector<std::vector<double>>>();
      for (const auto& row : rows) {
        if (row.size() != rows.size()) throw ConfigError("lambda: matrix is not square");
        config.lambda.insert(config.lambda.end(), row.begin(), row.end());
      }
    });
  if (j.contains("torus")) get_field("torus", [&] { config.torus = j["torus"].get<bool>(); });
  if (j.contains("replicas"))
    get_field("replicas", [&] { config.replicas = j["replicas"].get<std::uint64_t>(); });
  if (config.replicas < 1) throw ConfigError("replicas: must be at least 1");
  if (j.contains("seed")) get_field("seed", [&] { config.seed = j["seed"].get<std::uint64_t>(); });
  if (j.contains("y") && j.contains("y_grid")) throw ConfigError("y: give either 'y' or 'y_grid'");
  if (j.contains("y")) get_field("y", [&] { config.y_values = {j["y"].get<double>()}; });
  if (j.contains("y_grid"))
    get_field("y_grid", [&] { config.y_values = j["y_grid"].get<std::vector<double>>(); });
  for (double y : config.y_values)
    if (!(y >= 0.0) || !(y <= 1.0)) throw ConfigError("y: values must lie in [0,1]");
  if (j.contains("threshold")) {
    get_field("threshold", [&] { config.threshold = j["threshold"].get<double>(); });
    if (!(config.threshold > 0.0)) throw ConfigError("threshold: must be positive");
  }
  if (j.contains("threads"))
    get_field("threads", [&] { config.threads = j["threads"].get<unsigned>(); });

  // Kind-specific requirements.
  switch (config.kind) {
    case ExperimentKind::mc_isolated:
      if (config.n_values.empty()) throw ConfigError("n: required for mc-isolated");
      if (config.y_values.empty()) throw ConfigError("y: required for mc-isolated");
      resolve_mean_degree(config);
      break;
    case ExperimentKind::mc_degree:
      if (config.n_values.empty()) throw ConfigError("n: required for mc-degree");
      if (!config.edge_count) resolve_mean_degree(config);
      break;
    case ExperimentKind::coupling: {
      if (config.n_values.empty()) throw ConfigError("n: required for coupling");
      if (config.nu.empty()) throw ConfigError("nu: required for coupling");
      if (config.alphabet.size() == 0) {
        std::vector<std::string> symbols;
        for (std::size_t i = 0; i < config.nu.size(); ++i)
          symbols.push_back(std::string(1, static_cast<char>('a' + i)));
        config.alphabet = TypeAlphabet(std::move(symbols));
      }
      if (config.nu.size() != config.alphabet.size())
        throw ConfigError("nu: size does not match alphabet");
      if (config.lambda.size() != config.nu.size() * config.nu.size())
        throw ConfigError("lambda: required m*m matrix for coupling");
      break;
    }
    case ExperimentKind::rates_sweep:
      if (config.y_values.empty()) throw ConfigError("y: required for rates-sweep");
      if (!config.t && !config.mean_degree) throw ConfigError("t: required for rates-sweep");
      break;
  }
  return config;
}

nlohmann::json ExperimentConfig::semantic_echo() const {
  nlohmann::json echo;
  echo["kind"] = experiment_kind_name(kind);
  if (!n_values.empty()) echo["n"] = n_values;
  echo["d"] = dim;
  if (t) echo["t"] = *t;
  if (mean_degree) echo["mean_degree"] = *mean_degree;
  if (edge_count) echo["edge_count"] = *edge_count;
  if (alphabet.size() > 0) echo["alphabet"] = alphabet.symbols();
  if (!nu.empty()) echo["nu"] = nu;
  if (!lambda.empty()) {
    const std::size_t m = nu.size();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t a = 0; a < m; ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t b = 0; b < m; ++b) row.push_back(lambda[a * m + b]);
      rows.push_back(std::move(row));
    }
    echo["lambda"] = std::move(rows);
  }
  echo["torus"] = torus;
  echo["replicas"] = replicas;
  echo["seed"] = seed;
  if (!y_values.empty()) echo["y"] = y_values;
  if (kind == ExperimentKind::coupling) echo["threshold"] = threshold;
  return echo;
}

void parallel_for_indices(std::uint64_t count, unsigned threads,
                          const std::function<void(std::uint64_t)>& body) {
  unsigned worker_count = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  worker_count = static_cast<unsigned>(std::min<std::uint64_t>(worker_count, count));
  if (worker_count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (unsigned w = 0; w < worker_count; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::pair<TypeMeasure, PairMeasure> integralize_targets(const TypeAlphabet& alphabet,
                                                        const std::vector<double>& nu,
                                                        const std::vector<double>& lambda,
                                                        std::uint64_t n, std::uint32_t dim) {
  const std::size_t m = alphabet.size();
  if (nu.size() != m) throw std::invalid_argument("integralize: nu size mismatch");
  if (lambda.size() != m * m) throw std::invalid_argument("integralize: lambda size mismatch");
  if (n < 2) throw std::invalid_argument("integralize: n must be at least 2");

  // Largest-remainder apportionment; remainder ties broken by index order.
  std::vector<std::uint64_t> counts(m);
  std::vector<std::pair<double, std::size_t>> remainders(m);
  std::uint64_t assigned = 0;
  for (std::size_t a = 0; a < m; ++a) {
    const double target = nu[a] * static_cast<double>(n);
    counts[a] = static_cast<std::uint64_t>(std::floor(target));
    remainders[a] = {target - std::floor(target), a};
    assigned += counts[a];
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % m].second];

  const double rho = unit_ball_volume(dim);
  std::vector<std::uint64_t> budgets(m * m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double omega = rho * lambda[a * m + b] * nu[a] * nu[b];
      const double scale = a == b ? 2.0 : 1.0;
      auto budget = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * omega / scale));
      // Feasibility repair: clamp to the realized pool.
      const std::uint64_t pool =
          a == b ? counts[a] * (counts[a] - 1) / 2 : counts[a] * counts[b];
      budget = std::min(budget, pool);
      budgets[a * m + b] = budget;
      budgets[b * m + a] = budget;
    }
  }
  return {make_type_measure(alphabet, std::move(counts)),
          make_pair_measure(alphabet, std::move(budgets), n)};
}

ResultTable run_mc_isolated(const ExperimentConfig& config) {
  const double mean_degree = resolve_mean_degree(config);
  const double t_for_rate = mean_degree / unit_ball_volume(config.dim);
  const std::uint64_t replicas = config.replicas;
  const std::size_t n_count = config.n_values.size();

  // isolated-node count per (n index, replica) slot
  std::vector<std::uint32_t> isolated(n_count * replicas, 0);
  parallel_for_indices(n_count * replicas, config.threads, [&](std::uint64_t job) {
    const std::size_t ni = static_cast<std::size_t>(job / replicas);
    const std::uint64_t r = job % replicas;
    const std::uint64_t n = config.n_values[ni];
    Rng rng = Rng::stream(derive_seed(config.seed, ni), r);
    const TypedGraph graph = sample_gnm_geometric(n, config.dim, edge_budget(config, n), rng);
    std::vector<bool> touched(n, false);
    for (const auto& e : graph.edges()) {
      touched[e.u] = true;
      touched[e.v] = true;
    }
    std::uint32_t count = 0;
    for (bool b : touched)
      if (!b) ++count;
    isolated[job] = count;
  });

  ResultTable table;
  table.metadata = base_metadata(config);
  table.columns = {"n",     "lambda_n", "y",        "replicas",         "hits",
                   "p_hat", "rate_hat", "censored", "resolution_bound", "xi"};
  for (std::size_t ni = 0; ni < n_count; ++ni) {
    const std::uint64_t n = config.n_values[ni];
    const double resolution = std::log(static_cast<double>(replicas)) / static_cast<double>(n);
    for (double y : config.y_values) {
      const auto cutoff = static_cast<std::uint64_t>(
          std::max(0.0, std::ceil(y * static_cast<double>(n) - 1e-9)));
      std::uint64_t hits = 0;
      for (std::uint64_t r = 0; r < replicas; ++r)
        if (isolated[ni * replicas + r] >= cutoff) ++hits;
      const double p_hat = static_cast<double>(hits) / static_cast<double>(replicas);
      const bool censored = hits == 0;
      const double rate_hat =
          censored ? resolution : -std::log(p_hat) / static_cast<double>(n);
      const RateEvaluation xi = detached_rate(y, config.dim, t_for_rate);
      table.add_row({Cell{static_cast<std::int64_t>(n)},
                     Cell{static_cast<std::int64_t>(edge_budget(config, n))}, Cell{y},
                     Cell{static_cast<std::int64_t>(replicas)},
                     Cell{static_cast<std::int64_t>(hits)}, Cell{p_hat}, Cell{rate_hat},
                     Cell{static_cast<std::int64_t>(censored ? 1 : 0)}, Cell{resolution},
                     value_cell(xi.value)});
    }
  }
  return table;
}

ResultTable run_mc_degree(const ExperimentConfig& config) {
  const std::uint64_t replicas = config.replicas;
  const std::size_t n_count = config.n_values.size();

  std::vector<std::map<std::uint64_t, std::uint64_t>> histograms(n_count * replicas);
  parallel_for_indices(n_count * replicas, config.threads, [&](std::uint64_t job) {
    const std::size_t ni = static_cast<std::size_t>(job / replicas);
    const std::uint64_t r = job % replicas;
    const std::uint64_t n = config.n_values[ni];
    Rng rng = Rng::stream(derive_seed(config.seed, ni), r);
    const TypedGraph graph = sample_gnm_geometric(n, config.dim, edge_budget(config, n), rng);
    auto& hist = histograms[job];
    for (std::uint64_t deg : graph.degrees()) ++hist[deg];
  });

  ResultTable table;
  table.metadata = base_metadata(config);
  table.columns = {"scope", "n", "replica", "lambda_n", "ref_mean", "tv", "kl", "degenerate"};
  for (std::size_t ni = 0; ni < n_count; ++ni) {
    const std::uint64_t n = config.n_values[ni];
    const std::uint64_t budget = edge_budget(config, n);
    const double ref_mean = 2.0 * static_cast<double>(budget) / static_cast<double>(n);
    const bool degenerate = budget == 0;
    std::map<std::uint64_t, std::uint64_t> pooled;
    for (std::uint64_t r = 0; r < replicas; ++r) {
      const auto& hist = histograms[ni * replicas + r];
      for (const auto& [k, c] : hist) pooled[k] += c;
      table.add_row({Cell{std::string("replica")}, Cell{static_cast<std::int64_t>(n)},
                     Cell{static_cast<std::int64_t>(r)}, Cell{static_cast<std::int64_t>(budget)},
                     Cell{ref_mean}, Cell{tv_to_poisson(hist, n, ref_mean)},
                     value_cell(kl_to_poisson(hist, n, ref_mean)),
                     Cell{static_cast<std::int64_t>(degenerate ? 1 : 0)}});
    }
    table.add_row({Cell{std::string("pooled")}, Cell{static_cast<std::int64_t>(n)},
                   Cell{static_cast<std::int64_t>(-1)}, Cell{static_cast<std::int64_t>(budget)},
                   Cell{ref_mean}, Cell{tv_to_poisson(pooled, n * replicas, ref_mean)},
                   value_cell(kl_to_poisson(pooled, n * replicas, ref_mean)),
                   Cell{static_cast<std::int64_t>(degenerate ? 1 : 0)}});
  }
  return table;
}

ResultTable run_coupling_experiment(const ExperimentConfig& config) {
  if (config.n_values.size() != 1)
    throw ConfigError("n: coupling expects a single n value");
  const std::uint64_t n = config.n_values[0];
  auto [type_counts, pair_budgets] =
      integralize_targets(config.alphabet, config.nu, config.lambda, n, config.dim);
  const CollisionSchedule schedule = collision_schedule(type_counts, pair_budgets);

  std::vector<double> bennett(schedule.pairs.size());
  for (std::size_t p = 0; p < schedule.pairs.size(); ++p)
    bennett[p] = bennett_tail_bound(schedule.pairs[p], config.threshold);

  struct ReplicaResult {
    std::vector<std::uint64_t> mismatches;  // per scheduled pair
    std::uint64_t mismatch_total = 0;
    std::uint64_t l1_counts = 0;  // sum over cells of |M - occupancy| counts
  };
  std::vector<ReplicaResult> results(config.replicas);
  parallel_for_indices(config.replicas, config.threads, [&](std::uint64_t r) {
    Rng rng = Rng::stream(config.seed, r);
    const AllocationOutcome outcome =
        run_allocation_coupling(type_counts, pair_budgets, rng, config.dim);
    const LocalityMeasure graph_measure = empirical_locality_measure(outcome.graph);
    ReplicaResult& slot = results[r];
    slot.mismatches.reserve(schedule.pairs.size());
    for (const auto& ps : schedule.pairs) slot.mismatches.push_back(outcome.mismatch(ps.a, ps.b));
    slot.mismatch_total = outcome.mismatch_total();
    slot.l1_counts = l1_count_distance(graph_measure, outcome.occupancy);
  });

  ResultTable table;
  table.metadata = base_metadata(config);
  table.columns = {"scope",     "replica",  "n",        "pair",     "B",
                   "tv_bound",  "tv_actual", "bennett_bound_at_threshold", "violation"};
  const double nd = static_cast<double>(n);
  std::uint64_t violations = 0;
  std::vector<double> mean_b(schedule.pairs.size(), 0.0);
  for (std::uint64_t r = 0; r < config.replicas; ++r) {
    const ReplicaResult& slot = results[r];
    const double tv_bound = 2.0 * static_cast<double>(slot.mismatch_total) / nd;
    const double tv_actual = static_cast<double>(slot.l1_counts) / (2.0 * nd);
    // Exact integer form of tv_actual <= tv_bound.
    const bool violated = slot.l1_counts > 4 * slot.mismatch_total;
    if (violated) ++violations;
    if (schedule.pairs.empty()) {
      table.add_row({Cell{std::string("replica")}, Cell{static_cast<std::int64_t>(r)},
                     Cell{static_cast<std::int64_t>(n)}, Cell{std::string("*")},
                     Cell{static_cast<std::int64_t>(0)}, Cell{tv_bound}, Cell{tv_actual},
                     Cell{0.0}, Cell{static_cast<std::int64_t>(violated ? 1 : 0)}});
    }
    for (std::size_t p = 0; p < schedule.pairs.size(); ++p) {
      mean_b[p] += static_cast<double>(slot.mismatches[p]);
      table.add_row({Cell{std::string("replica")}, Cell{static_cast<std::int64_t>(r)},
                     Cell{static_cast<std::int64_t>(n)},
                     Cell{pair_label(config.alphabet, schedule.pairs[p].a, schedule.pairs[p].b)},
                     Cell{static_cast<std::int64_t>(slot.mismatches[p])}, Cell{tv_bound},
                     Cell{tv_actual}, Cell{bennett[p]},
                     Cell{static_cast<std::int64_t>(violated ? 1 : 0)}});
    }
  }
  for (std::size_t p = 0; p < schedule.pairs.size(); ++p) {
    mean_b[p] /= static_cast<double>(config.replicas);
    table.add_row({Cell{std::string("mean")}, Cell{static_cast<std::int64_t>(-1)},
                   Cell{static_cast<std::int64_t>(n)},
                   Cell{pair_label(config.alphabet, schedule.pairs[p].a, schedule.pairs[p].b)},
                   Cell{mean_b[p]}, Cell{schedule.pairs[p].expected_mismatches}, Cell{0.0},
                   Cell{bennett[p]}, Cell{static_cast<std::int64_t>(0)}});
  }
  table.add_row({Cell{std::string("total")}, Cell{static_cast<std::int64_t>(-1)},
                 Cell{static_cast<std::int64_t>(n)}, Cell{std::string("*")},
                 Cell{static_cast<std::int64_t>(0)}, Cell{0.0}, Cell{0.0}, Cell{0.0},
                 Cell{static_cast<std::int64_t>(violations)}});
  return table;
}

ResultTable run_rates_sweep(const ExperimentConfig& config) {
  const double mean_degree = resolve_mean_degree(config);
  const double rho = unit_ball_volume(config.dim);
  const double t = mean_degree / rho;

  ResultTable table;
  table.metadata = base_metadata(config);
  table.columns = {"y", "d", "t", "mu", "feasible", "value", "alpha"};
  for (double y : config.y_values) {
    const RateEvaluation eval = detached_rate(y, config.dim, t);
    table.add_row({Cell{y}, Cell{static_cast<std::int64_t>(config.dim)}, Cell{t},
                   Cell{mean_degree}, Cell{static_cast<std::int64_t>(eval.feasible ? 1 : 0)},
                   value_cell(eval.value),
                   eval.alpha ? Cell{*eval.alpha} : Cell{std::string("na")}});
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::mc_isolated: return run_mc_isolated(config);
    case ExperimentKind::mc_degree: return run_mc_degree(config);
    case ExperimentKind::coupling: return run_coupling_experiment(config);
    case ExperimentKind::rates_sweep: return run_rates_sweep(config);
  }
  throw ConfigError("kind: unknown experiment kind");
}

std::vector<std::pair<std::string, std::string>> plot_series(const ExperimentConfig& config,
                                                             const ResultTable& table) {
  std::vector<std::pair<std::string, std::string>> series;
  auto column = [&](const std::string& name) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      if (table.columns[c] == name) return c;
    throw std::logic_error("plot_series: missing column " + name);
  };
  auto numeric = [](const Cell& cell) {
    if (std::holds_alternative<std::int64_t>(cell))
      return static_cast<double>(std::get<std::int64_t>(cell));
    if (std::holds_alternative<double>(cell)) return std::get<double>(cell);
    return std::numeric_limits<double>::infinity();
  };
  auto make = [&](const std::string& name, const std::string& header, std::size_t xcol,
                  std::size_t ycol, auto&& keep) {
    std::string content = "# " + header + "\n";
    for (const auto& row : table.rows) {
      if (!keep(row)) continue;
      content += format_double(numeric(row[xcol]));
      content += ' ';
      content += format_double(numeric(row[ycol]));
      content += '\n';
    }
    series.emplace_back(name, std::move(content));
  };

  switch (config.kind) {
    case ExperimentKind::mc_isolated: {
      const std::size_t yc = column("y");
      for (std::size_t yi = 0; yi < config.y_values.size(); ++yi) {
        const double y = config.y_values[yi];
        auto keep = [&, y](const std::vector<Cell>& row) { return numeric(row[yc]) == y; };
        const std::string tag = "y" + std::to_string(yi);
        make(tag + "_rate_vs_n", "n rate_hat (y = " + format_double(y) + ")", column("n"),
             column("rate_hat"), keep);
        make(tag + "_xi_vs_n", "n xi (y = " + format_double(y) + ")", column("n"), column("xi"),
             keep);
      }
      break;
    }
    case ExperimentKind::mc_degree: {
      const std::size_t sc = column("scope");
      auto keep = [&](const std::vector<Cell>& row) {
        return std::get<std::string>(row[sc]) == "pooled";
      };
      make("tv_vs_n", "n tv (pooled)", column("n"), column("tv"), keep);
      break;
    }
    case ExperimentKind::coupling: {
      const std::size_t sc = column("scope");
      const std::size_t pc = column("pair");
      std::string first_pair;
      for (const auto& row : table.rows)
        if (std::get<std::string>(row[sc]) == "replica") {
          first_pair = std::get<std::string>(row[pc]);
          break;
        }
      auto keep = [&](const std::vector<Cell>& row) {
        return std::get<std::string>(row[sc]) == "replica" &&
               std::get<std::string>(row[pc]) == first_pair;
      };
      make("tv_actual_vs_replica", "replica tv_actual", column("replica"), column("tv_actual"),
           keep);
      make("tv_bound_vs_replica", "replica tv_bound", column("replica"), column("tv_bound"), keep);
      break;
    }
    case ExperimentKind::rates_sweep: {
      auto keep = [](const std::vector<Cell>&) { return true; };
      make("xi_vs_y", "y xi", column("y"), column("value"), keep);
      break;
    }
  }
  return series;
}

}  // namespace trgg
