#include "trgg/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "trgg/errors.hpp"
#include "trgg/models.hpp"

namespace trgg {

namespace {

std::uint64_t pair_key(std::uint64_t n, std::uint32_t u, std::uint32_t v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * n + v;
}

}  // namespace

std::uint64_t AllocationOutcome::mismatch(std::size_t a, std::size_t b) const {
  return mismatch_matrix.at(a * occupancy.alphabet.size() + b);
}

std::uint64_t AllocationOutcome::mismatch_total() const {
  std::uint64_t total = 0;
  for (std::uint64_t v : mismatch_matrix) total += v;
  return total;
}

double AllocationOutcome::tv_bound() const {
  return 2.0 * static_cast<double>(mismatch_total()) / static_cast<double>(occupancy.n);
}

AllocationOutcome run_allocation_coupling(const TypeMeasure& type_counts,
                                          const PairMeasure& pair_budgets, Rng& rng,
                                          std::uint32_t dim) {
  check_pair_feasibility(type_counts, pair_budgets);
  const std::uint64_t n = type_counts.n;
  const std::size_t m = type_counts.alphabet.size();

  auto positions = sample_positions(n, dim, rng);
  std::vector<std::uint32_t> types;
  types.reserve(n);
  for (std::size_t a = 0; a < m; ++a)
    types.insert(types.end(), type_counts.counts[a], static_cast<std::uint32_t>(a));
  for (std::uint64_t i = n - 1; i > 0; --i)
    std::swap(types[i], types[rng.bounded(i + 1)]);

  std::vector<std::vector<std::uint32_t>> members(m);
  for (std::uint32_t i = 0; i < n; ++i) members[types[i]].push_back(i);

  std::vector<std::uint32_t> balls(n * m, 0);  // balls[bin * m + type]
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> edge_set;
  std::vector<std::uint64_t> mismatches(m * m, 0);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint8_t>> collision_log;

  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const std::uint64_t budget = pair_budgets.pair_count(a, b);
      if (budget == 0) continue;
      const auto& wa = members[a];
      const auto& wb = members[b];
      const std::uint64_t pool = (a == b)
                                     ? static_cast<std::uint64_t>(wa.size()) * (wa.size() - 1) / 2
                                     : static_cast<std::uint64_t>(wa.size()) * wb.size();
      auto& log = collision_log[{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)}];
      log.resize(budget, 0);
      std::uint64_t added = 0;

      // Uniform draw from the eligible non-edges of this pair. Rejection
      // while more than half of the pool remains, explicit enumeration
      // afterwards.
      auto draw_replacement = [&]() -> Edge {
        if (2 * (pool - added) > pool) {
          while (true) {
            const std::uint32_t u = wa[rng.pick_index(wa.size())];
            const std::uint32_t v = wb[rng.pick_index(wb.size())];
            if (u == v) continue;
            if (edge_set.count(pair_key(n, u, v))) continue;
            return Edge{std::min(u, v), std::max(u, v)};
          }
        }
        std::vector<Edge> eligible;
        eligible.reserve(pool - added);
        auto keep = [&](std::uint32_t u, std::uint32_t v) {
          if (!edge_set.count(pair_key(n, u, v)))
            eligible.push_back(Edge{std::min(u, v), std::max(u, v)});
        };
        if (a == b) {
          for (std::size_t i = 0; i + 1 < wa.size(); ++i)
            for (std::size_t j = i + 1; j < wa.size(); ++j) keep(wa[i], wa[j]);
        } else {
          for (std::uint32_t u : wa)
            for (std::uint32_t v : wb) keep(u, v);
        }
        return eligible[rng.pick_index(eligible.size())];
      };

      for (std::uint64_t step = 0; step < budget; ++step) {
        const std::uint32_t i = wa[rng.pick_index(wa.size())];
        const std::uint32_t j = wb[rng.pick_index(wb.size())];
        // Balls drop before the edge test, collisions included.
        ++balls[static_cast<std::size_t>(i) * m + b];
        ++balls[static_cast<std::size_t>(j) * m + a];

        const bool collision = (i == j) || edge_set.count(pair_key(n, i, j)) > 0;
        Edge placed;
        if (!collision) {
          placed = Edge{std::min(i, j), std::max(i, j)};
        } else {
          placed = draw_replacement();
          log[step] = 1;
          const bool differs = (i == j) || placed.u != std::min(i, j) || placed.v != std::max(i, j);
          if (differs) {
            ++mismatches[a * m + b];
            if (a != b) ++mismatches[b * m + a];
          }
        }
        edge_set.insert(pair_key(n, placed.u, placed.v));
        edges.push_back(placed);
        ++added;
      }
    }
  }

  LocalityMeasure occupancy{type_counts.alphabet, {}, n};
  LocalityCell cell;
  cell.sigma.resize(m);
  for (std::uint64_t i = 0; i < n; ++i) {
    cell.type = types[i];
    for (std::size_t t = 0; t < m; ++t) cell.sigma[t] = balls[i * m + t];
    ++occupancy.counts[cell];
  }

  TypedGraph graph(dim, type_counts.alphabet, std::move(positions), std::move(types),
                   std::move(edges));
  return AllocationOutcome{std::move(occupancy), std::move(graph), std::move(mismatches),
                           std::move(collision_log)};
}

CollisionSchedule collision_schedule(const TypeMeasure& type_counts,
                                     const PairMeasure& pair_budgets) {
  check_pair_feasibility(type_counts, pair_budgets);
  const std::size_t m = type_counts.alphabet.size();
  CollisionSchedule schedule;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const std::uint64_t steps = pair_budgets.pair_count(a, b);
      if (steps == 0) continue;
      PairCollisionSchedule ps;
      ps.a = static_cast<std::uint32_t>(a);
      ps.b = static_cast<std::uint32_t>(b);
      ps.steps = steps;
      ps.probabilities.reserve(steps);
      const double md = static_cast<double>(steps);
      const double diag = (a == b) ? 1.0 / md : 0.0;
      double sum_var = 0.0;
      for (std::uint64_t k = 1; k <= steps; ++k) {
        const double p = diag + (1.0 - diag) * static_cast<double>(k - 1) / (md * md);
        ps.probabilities.push_back(p);
        ps.expected_mismatches += p;
        sum_var += p * (1.0 - p);
      }
      ps.variance_rate = sum_var / md;
      schedule.pairs.push_back(std::move(ps));
    }
  }
  return schedule;
}

double bennett_h(double t) {
  if (t < 0.0) throw std::invalid_argument("bennett_h: t must be nonnegative");
  return (1.0 + t) * std::log1p(t) - t;
}

double bennett_tail_bound(const PairCollisionSchedule& schedule, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("bennett_tail_bound: threshold must be positive");
  if (schedule.steps == 0) throw std::invalid_argument("bennett_tail_bound: empty schedule");
  const double v = static_cast<double>(schedule.steps) * schedule.variance_rate;
  if (v <= 0.0) return threshold <= schedule.expected_mismatches ? 1.0 : 0.0;
  return std::exp(-v * bennett_h(threshold / v));
}

}  // namespace trgg
