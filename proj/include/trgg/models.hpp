#pragma once

#include <cstdint>
#include <vector>

#include "trgg/graph.hpp"
#include "trgg/measures.hpp"
#include "trgg/rng.hpp"

namespace trgg {

// Symmetric per-type-pair link radii. An entry of 0 disables links between
// that pair of types; entries must be nonnegative and at least one entry
// must be positive.
class RadiusTable {
 public:
  RadiusTable(std::size_t types, double uniform_radius);
  RadiusTable(std::size_t types, std::vector<double> matrix);

  double operator()(std::uint32_t a, std::uint32_t b) const { return matrix_[a * types_ + b]; }
  double max_radius() const { return max_radius_; }
  std::size_t types() const { return types_; }

 private:
  std::size_t types_;
  std::vector<double> matrix_;
  double max_radius_;
};

struct ModelParams {
  std::uint64_t n = 0;
  std::uint32_t dim = 2;
  TypeAlphabet alphabet;
  std::vector<double> type_law;  // probability vector over the alphabet
  std::vector<double> lambda;    // m*m symmetric, >= 0, not identically zero
  bool torus = false;
  std::uint64_t seed = 0;

  void validate() const;
  // r(a,b) = min((lambda(a,b)/n)^(1/dim), 1); 0 where lambda(a,b) == 0.
  RadiusTable link_radii() const;
};

// n i.i.d. uniform points in [0,1)^dim, row-major.
std::vector<double> sample_positions(std::uint64_t n, std::uint32_t dim, Rng& rng);

// All unordered pairs within their type-dependent radius (Euclidean metric;
// wrapped per coordinate when torus is set). Implemented with a uniform
// bucket grid of cell side >= the maximum radius, scanning the 3^d
// neighbourhood of each point's cell.
std::vector<Edge> neighbor_pairs(const std::vector<double>& positions, std::uint32_t dim,
                                 const std::vector<std::uint32_t>& types, const RadiusTable& radii,
                                 bool torus);

// Typed random geometric graph: uniform positions, i.i.d. types, link radii
// scaled so that n * r^dim approaches lambda.
TypedGraph sample_trgg(const ModelParams& params);

// Single-type geometric graph with a fixed number of edges drawn uniformly
// without replacement among all pairs. Positions are kept but do not enter
// the edge draw, so the degree structure is independent of the geometry;
// the ball-volume constant only sets the edge-budget scale in the rate
// evaluations.
TypedGraph sample_gnm_geometric(std::uint64_t n, std::uint32_t dim, std::uint64_t edge_count,
                                Rng& rng);

// Graph conditioned to hit the requested type counts and pair budgets
// exactly: types are a uniform permutation of the prescribed multiset, and
// each type pair receives its exact edge budget, drawn uniformly without
// replacement from the eligible pool. Throws InfeasibleError when a budget
// exceeds its pool.
TypedGraph sample_conditional_trgg(const TypeMeasure& type_counts, const PairMeasure& pair_budgets,
                                   Rng& rng, std::uint32_t dim = 2);

// Shared feasibility check for the conditional sampler and the allocation
// coupling.
void check_pair_feasibility(const TypeMeasure& type_counts, const PairMeasure& pair_budgets);

}  // namespace trgg
