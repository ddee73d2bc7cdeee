#pragma once

// Random allocation model coupled to the conditional sampler. For each type
// pair {a,b} and each of its m(a,b) steps, two bins are drawn uniformly from
// the type classes; both receive a ball, and the same pair becomes an edge
// of the coupled graph unless it collides (identical bins, or the edge
// already exists), in which case a uniform replacement edge is drawn from
// the remaining pool and the step is recorded as a mismatch.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "trgg/graph.hpp"
#include "trgg/measures.hpp"
#include "trgg/rng.hpp"

namespace trgg {

struct PairCollisionSchedule {
  std::uint32_t a = 0;  // a <= b
  std::uint32_t b = 0;
  std::uint64_t steps = 0;               // m(a,b)
  std::vector<double> probabilities;     // p[k-1] for step k = 1..steps
  double expected_mismatches = 0.0;      // sum of p[k]
  double variance_rate = 0.0;            // (1/m) * sum p[k](1 - p[k])
};

// Per-step collision probabilities
//   p[k] = (1/m) [a==b] + (1 - (1/m)[a==b]) (k-1)/m^2
// for every pair with a positive budget, in (a,b) lexicographic order.
struct CollisionSchedule {
  std::vector<PairCollisionSchedule> pairs;
};

struct AllocationOutcome {
  LocalityMeasure occupancy;  // per-bin ball counts (the occupancy measure)
  TypedGraph graph;           // the coupled conditional sample
  // Mismatch step counts as an m*m matrix with mirrored off-diagonal
  // entries; mismatch_total() sums the full matrix.
  std::vector<std::uint64_t> mismatch_matrix;
  // Per-pair step flags, keyed by (a,b) with a <= b; 1 marks a collision.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint8_t>> collision_log;

  std::uint64_t mismatch(std::size_t a, std::size_t b) const;
  std::uint64_t mismatch_total() const;
  // (2/n) * mismatch_total(); bounds the total variation distance between
  // the graph's locality measure and the occupancy measure.
  double tv_bound() const;
};

AllocationOutcome run_allocation_coupling(const TypeMeasure& type_counts,
                                          const PairMeasure& pair_budgets, Rng& rng,
                                          std::uint32_t dim = 2);

CollisionSchedule collision_schedule(const TypeMeasure& type_counts,
                                     const PairMeasure& pair_budgets);

// h(t) = (1+t) ln(1+t) - t for t >= 0.
double bennett_h(double t);

// exp(-m sigma^2 h(threshold / (m sigma^2))); bounds the probability that
// the pair's mismatch count exceeds its expectation by `threshold`. With a
// degenerate schedule (sigma^2 == 0) the count is deterministic and the
// bound is 1 or 0.
double bennett_tail_bound(const PairCollisionSchedule& schedule, double threshold);

}  // namespace trgg
