// Acceptance suite: one pass/fail line per criterion, exit 0 only if every
// selected criterion passes. Run a single criterion with --criterion N.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trgg/allocation.hpp"
#include "trgg/errors.hpp"
#include "trgg/harness.hpp"
#include "trgg/measures.hpp"
#include "trgg/models.hpp"
#include "trgg/rates.hpp"
#include "trgg/rng.hpp"
#include "trgg/table.hpp"

using namespace trgg;
using nlohmann::json;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::size_t column_index(const ResultTable& table, const std::string& name) {
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    if (table.columns[c] == name) return c;
  throw std::logic_error("missing column " + name);
}

double cell_number(const ResultTable::Cell& cell) {
  if (std::holds_alternative<std::int64_t>(cell))
    return static_cast<double>(std::get<std::int64_t>(cell));
  if (std::holds_alternative<double>(cell)) return std::get<double>(cell);
  return std::numeric_limits<double>::infinity();
}

// 1. Exact consistency of conditional samples: marginal identity at integer
//    precision over 100 seeded runs, n=200, two types, within a minute.
bool criterion_1(std::string& detail) {
  Timer timer;
  TypeAlphabet alphabet({"a", "b"});
  const auto type_counts = make_type_measure(alphabet, {120, 80});
  const auto budgets = make_pair_measure(alphabet, {40, 60, 60, 25}, 200);
  for (int r = 0; r < 100; ++r) {
    Rng rng = Rng::stream(1001, static_cast<std::uint64_t>(r));
    const auto graph = sample_conditional_trgg(type_counts, budgets, rng, 2);
    const auto ell = empirical_locality_measure(graph);
    const auto pair = empirical_pair_measure(graph);
    const auto [first, second] = locality_marginals(ell);
    if (first.counts != empirical_type_measure(graph).counts) return false;
    if (!second.symmetric()) return false;
    if (second.to_pair_measure().edge_counts != pair.edge_counts) return false;
    if (!check_consistency(pair, ell, 0.0)) return false;
    if (first.counts != type_counts.counts) return false;
    if (pair.edge_counts != budgets.edge_counts) return false;
  }
  detail = "100 samples, integer-exact marginals, " + format_double(timer.seconds()) + "s";
  return timer.seconds() < 60.0;
}

// 2. Grid neighbour search equals brute force on 50 mixed instances.
bool criterion_2(std::string& detail) {
  Rng rng(2002);
  std::uint64_t checked_pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t dim = 1 + static_cast<std::uint32_t>(rng.bounded(3));
    const std::uint64_t n = 2 + rng.bounded(499);
    const bool torus = trial % 2 == 0;
    const auto positions = sample_positions(n, dim, rng);
    std::vector<std::uint32_t> types(n);
    for (auto& t : types) t = static_cast<std::uint32_t>(rng.bounded(3));
    std::vector<double> matrix(9, 0.0);
    auto set = [&](std::size_t a, std::size_t b, double v) {
      matrix[a * 3 + b] = v;
      matrix[b * 3 + a] = v;
    };
    set(0, 0, 0.01 + 0.25 * rng.next_double());
    set(1, 1, 0.01 + 0.25 * rng.next_double());
    set(2, 2, 0.01 + 0.25 * rng.next_double());
    set(0, 1, rng.bounded(4) == 0 ? 0.0 : 0.01 + 0.25 * rng.next_double());
    set(0, 2, 0.01 + 0.25 * rng.next_double());
    set(1, 2, rng.bounded(4) == 0 ? 0.0 : 0.01 + 0.25 * rng.next_double());
    const RadiusTable radii(3, matrix);

    auto fast = neighbor_pairs(positions, dim, types, radii, torus);
    // quadratic scan, independent of the grid path
    std::vector<Edge> slow;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        const double r = radii(types[i], types[j]);
        if (r <= 0.0) continue;
        double d2 = 0.0;
        for (std::uint32_t k = 0; k < dim; ++k) {
          double dx = std::abs(positions[i * dim + k] - positions[j * dim + k]);
          if (torus) dx = std::min(dx, 1.0 - dx);
          d2 += dx * dx;
        }
        if (d2 <= r * r) slow.push_back(Edge{i, j});
      }
    }
    if (fast != slow) return false;
    checked_pairs += fast.size();
  }
  detail = "50 instances, 0 discrepancies, " + std::to_string(checked_pairs) + " edges compared";
  return true;
}

// 3. Rate-function zeros at the reference laws.
bool criterion_3(std::string& detail) {
  double worst_xi = 0.0, worst_eta = 0.0;
  for (std::uint32_t d : {1u, 2u, 3u}) {
    for (double mu : {0.5, 1.0, 2.0}) {
      const double t = mu / unit_ball_volume(d);
      const auto xi = detached_rate(std::exp(-mu), d, t);
      if (!xi.feasible) return false;
      worst_xi = std::max(worst_xi, xi.value);

      const std::uint64_t cap = poisson_tail_cap(mu, 1e-14);
      std::map<std::uint64_t, double> delta;
      double mass = 0.0;
      for (std::uint64_t k = 0; k <= cap; ++k) mass += (delta[k] = poisson_pmf(mu, k));
      for (auto& [k, v] : delta) v /= mass;
      const auto eta = degree_rate(delta, d, t);
      if (!eta.feasible) return false;
      worst_eta = std::max(worst_eta, eta.value);
    }
  }
  detail = "max xi zero " + format_double(worst_xi) + ", max eta zero " + format_double(worst_eta);
  return worst_xi < 1e-10 && worst_eta < 1e-8;
}

// 4. Closed-form detached rate against the independent minimizer, and
//    agreement on infeasibility.
bool criterion_4(std::string& detail) {
  double worst = 0.0;
  int finite_cells = 0, infeasible_cells = 0;
  for (double mu : {0.5, 1.0, 2.0}) {
    const double t = mu / unit_ball_volume(2);
    for (int i = 1; i <= 19; ++i) {
      const double y = static_cast<double>(i) / 20.0;
      const auto direct = detached_rate(y, 2, t);
      bool oracle_feasible = true;
      double oracle_value = std::numeric_limits<double>::infinity();
      try {
        oracle_value = detached_rate_oracle(y, mu, 300);
      } catch (const InfeasibleError&) {
        oracle_feasible = false;
      }
      if (direct.feasible != oracle_feasible) return false;
      if (!direct.feasible) {
        ++infeasible_cells;
        continue;
      }
      ++finite_cells;
      worst = std::max(worst, std::abs(direct.value - oracle_value));
    }
  }
  detail = std::to_string(finite_cells) + " finite cells agree within " + format_double(worst) +
           ", " + std::to_string(infeasible_cells) + " infeasible cells agree on inf";
  return worst < 1e-6;
}

// 5. Unit-ball constants.
bool criterion_5(std::string& detail) {
  const double e1 = std::abs(unit_ball_volume(1) - 2.0);
  const double e2 = std::abs(unit_ball_volume(2) - M_PI);
  const double e3 = std::abs(unit_ball_volume(3) - 4.0 * M_PI / 3.0);
  detail = "errors " + format_double(e1) + ", " + format_double(e2) + ", " + format_double(e3);
  return e1 < 1e-12 && e2 < 1e-12 && e3 < 1e-12;
}

// 6. Coupling inequality at n=1000 over 200 replicas.
bool criterion_6(std::string& detail) {
  const json cfg = {{"kind", "coupling"},
                    {"n", 1000},
                    {"nu", {0.5, 0.5}},
                    {"lambda", {{0.0, 0.6}, {0.6, 0.0}}},
                    {"replicas", 200},
                    {"threshold", 5.0},
                    {"seed", 606}};
  const auto table = run_coupling_experiment(ExperimentConfig::from_json(cfg));
  const auto scope = column_index(table, "scope");
  const auto pair = column_index(table, "pair");
  const auto bcol = column_index(table, "B");
  const auto viol = column_index(table, "violation");

  std::int64_t violations = -1;
  double worst_mean = 0.0;
  for (const auto& row : table.rows) {
    const auto& s = std::get<std::string>(row[scope]);
    if (s == "total") violations = std::get<std::int64_t>(row[viol]);
    if (s == "mean") {
      const auto& label = std::get<std::string>(row[pair]);
      const double budget_bound = label[0] == label[2] ? 2.1 : 1.1;  // 1 + [a==b] + 0.1
      const double mean_b = cell_number(row[bcol]);
      if (mean_b > budget_bound) return false;
      worst_mean = std::max(worst_mean, mean_b);
    }
  }
  detail = "violations " + std::to_string(violations) + ", worst mean B " +
           format_double(worst_mean);
  return violations == 0;
}

// 7. Degree law Poisson limit at n = 2*10^4 with lambda_n = n.
bool criterion_7(std::string& detail) {
  Timer timer;
  const json cfg = {{"kind", "mc-degree"}, {"n", 20000},  {"edge_count", 20000},
                    {"replicas", 5},       {"seed", 707}};
  const auto table = run_mc_degree(ExperimentConfig::from_json(cfg));
  const auto scope = column_index(table, "scope");
  const auto tv = column_index(table, "tv");
  double mean_tv = 0.0;
  int rows = 0;
  for (const auto& row : table.rows) {
    if (std::get<std::string>(row[scope]) != "replica") continue;
    mean_tv += std::get<double>(row[tv]);
    ++rows;
  }
  mean_tv /= rows;
  detail = "mean TV to Poisson(2) over 5 replicas = " + format_double(mean_tv) + ", " +
           format_double(timer.seconds()) + "s";
  return mean_tv < 0.02 && timer.seconds() < 120.0;
}

// 8. LDP trend: plain Monte Carlo at d=2, mu=1, y=0.6, n in {40,80,160},
//    R=200000. The gap |rate_hat - xi(0.6)| must shrink strictly in n and
//    land within 25% at n=160.
bool criterion_8(std::string& detail) {
  Timer timer;
  const double t = 1.0 / M_PI;  // mu = rho(2) t = 1
  const json cfg = {{"kind", "mc-isolated"}, {"n", {40, 80, 160}}, {"t", t},
                    {"y", 0.6},              {"replicas", 200000}, {"seed", 808}};
  const auto table = run_mc_isolated(ExperimentConfig::from_json(cfg));
  const double xi = detached_rate(0.6, 2, t).value;

  const auto ncol = column_index(table, "n");
  const auto rate = column_index(table, "rate_hat");
  const auto cens = column_index(table, "censored");
  std::vector<double> gaps;
  std::string runs;
  for (const auto& row : table.rows) {
    const double gap = std::abs(std::get<double>(row[rate]) - xi);
    gaps.push_back(gap);
    runs += " n=" + std::to_string(std::get<std::int64_t>(row[ncol])) + " rate=" +
            format_double(std::get<double>(row[rate])) +
            (std::get<std::int64_t>(row[cens]) ? "(censored)" : "") + " gap=" +
            format_double(gap);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
  const bool close = gaps.back() <= 0.25 * xi;
  detail = "xi(0.6)=" + format_double(xi) + runs + ", " + format_double(timer.seconds()) + "s";

  // Supplementary evidence at an observable deviation level: the same
  // machinery at y = 0.45 resolves the tail and shows the shrinking gap.
  const json demo_cfg = {{"kind", "mc-isolated"}, {"n", {40, 80, 160}}, {"t", t},
                         {"y", 0.45},             {"replicas", 200000}, {"seed", 808}};
  const auto demo = run_mc_isolated(ExperimentConfig::from_json(demo_cfg));
  const double xi_demo = detached_rate(0.45, 2, t).value;
  detail += "; supplementary y=0.45 gaps";
  for (const auto& row : demo.rows)
    detail += " " + format_double(std::abs(std::get<double>(row[rate]) - xi_demo));
  return decreasing && close && timer.seconds() < 600.0;
}

// 9. Byte-identical CSV for identical config and seed, any thread count.
bool criterion_9(std::string& detail) {
  json iso = {{"kind", "mc-isolated"}, {"n", {40, 80}}, {"t", 1.0 / M_PI},
              {"y", 0.5},             {"replicas", 500}, {"seed", 909}};
  auto iso_cfg = ExperimentConfig::from_json(iso);
  iso_cfg.threads = 1;
  const auto a = emit_csv(run_mc_isolated(iso_cfg));
  iso_cfg.threads = 4;
  const auto b = emit_csv(run_mc_isolated(iso_cfg));

  json cpl = {{"kind", "coupling"},
              {"n", 400},
              {"nu", {0.5, 0.5}},
              {"lambda", {{0.0, 0.5}, {0.5, 0.0}}},
              {"replicas", 40},
              {"seed", 910}};
  auto cpl_cfg = ExperimentConfig::from_json(cpl);
  cpl_cfg.threads = 1;
  const auto c = emit_csv(run_coupling_experiment(cpl_cfg));
  cpl_cfg.threads = 3;
  const auto d = emit_csv(run_coupling_experiment(cpl_cfg));

  detail = "mc-isolated and coupling CSVs identical across thread counts";
  return a == b && c == d;
}

struct Criterion {
  int number;
  const char* name;
  bool (*run)(std::string&);
};

const std::vector<Criterion> kCriteria = {
    {1, "exact consistency of conditional samples", criterion_1},
    {2, "neighbour-search brute-force oracle", criterion_2},
    {3, "rate-function zeros", criterion_3},
    {4, "detached rate vs independent minimizer", criterion_4},
    {5, "unit-ball constants", criterion_5},
    {6, "coupling inequality and mismatch means", criterion_6},
    {7, "degree Poisson limit", criterion_7},
    {8, "detached-node LDP trend", criterion_8},
    {9, "thread-count determinism", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }
  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.number != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << ": "
              << criterion.name << " - " << detail << '\n';
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
