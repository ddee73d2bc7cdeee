#pragma once

// Empirical statistics of a typed graph, stored as integer counts with an
// explicit total n. Probabilities are derived views; keeping the raw counts
// makes the marginal and consistency identities exact, so a tolerance of 0
// is meaningful in comparisons.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trgg/alphabet.hpp"
#include "trgg/graph.hpp"

namespace trgg {

// Node counts per type; counts sum to n.
struct TypeMeasure {
  TypeAlphabet alphabet;
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;

  double probability(std::size_t a) const { return static_cast<double>(counts.at(a)) / static_cast<double>(n); }
  std::vector<double> probabilities() const;

  std::string to_json() const;
  static TypeMeasure from_json(const std::string& text);
};

// Validates that counts sum to n > 0.
TypeMeasure make_type_measure(TypeAlphabet alphabet, std::vector<std::uint64_t> counts);

// Unordered edge counts per type pair, kept as a full symmetric matrix:
// entry (a,b) is the number of edges joining a type-a node to a type-b node.
// The usual pair measure is the derived view
//   omega(a,b) = (1 + [a==b]) * count(a,b) / n,
// whose total mass equals 2|E|/n.
struct PairMeasure {
  TypeAlphabet alphabet;
  std::vector<std::uint64_t> edge_counts;  // size m*m, symmetric
  std::uint64_t n = 0;

  std::uint64_t pair_count(std::size_t a, std::size_t b) const {
    return edge_counts.at(a * alphabet.size() + b);
  }
  double omega(std::size_t a, std::size_t b) const {
    return (a == b ? 2.0 : 1.0) * static_cast<double>(pair_count(a, b)) / static_cast<double>(n);
  }
  std::uint64_t total_edges() const;
  double mass() const;  // == 2|E|/n

  std::string to_json() const;
  static PairMeasure from_json(const std::string& text);
};

// Validates symmetry of the count matrix.
PairMeasure make_pair_measure(TypeAlphabet alphabet, std::vector<std::uint64_t> edge_counts,
                              std::uint64_t n);

// A locality cell: a node type together with the vector of per-type
// neighbour counts. sigma has one entry per alphabet symbol.
struct LocalityCell {
  std::uint32_t type = 0;
  std::vector<std::uint32_t> sigma;

  friend bool operator==(const LocalityCell&, const LocalityCell&) = default;
  friend auto operator<=>(const LocalityCell&, const LocalityCell&) = default;
};

// Node counts per locality cell; counts sum to n. Sparse: the support grows
// with the number of distinct local configurations, not with n * m.
struct LocalityMeasure {
  TypeAlphabet alphabet;
  std::map<LocalityCell, std::uint64_t> counts;
  std::uint64_t n = 0;

  std::string to_json() const;
  static LocalityMeasure from_json(const std::string& text);
};

// Node counts per degree; counts sum to n.
struct DegreeDistribution {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n = 0;

  double probability(std::uint64_t degree) const;
  double mean() const;

  std::string to_json() const;
  static DegreeDistribution from_json(const std::string& text);
};

// Directed type-pair incidence counts: entry (a,b) is the number of
// (node, neighbour) incidences with node type a and neighbour type b, i.e.
// n times the sigma-weighted marginal of a locality measure. Symmetric
// whenever the locality measure comes from a graph; an arbitrary measure
// need not produce a symmetric matrix, so callers must check before
// converting to a PairMeasure.
struct PairCountMatrix {
  TypeAlphabet alphabet;
  std::vector<std::uint64_t> counts;  // size m*m
  std::uint64_t n = 0;

  std::uint64_t at(std::size_t a, std::size_t b) const {
    return counts.at(a * alphabet.size() + b);
  }
  bool symmetric() const;
  // Requires symmetric() and an even diagonal.
  PairMeasure to_pair_measure() const;
};

TypeMeasure empirical_type_measure(const TypedGraph& graph);
PairMeasure empirical_pair_measure(const TypedGraph& graph);
LocalityMeasure empirical_locality_measure(const TypedGraph& graph);

// Degree distribution via the locality measure: the mass of all cells whose
// neighbour counts sum to r.
DegreeDistribution degree_distribution(const LocalityMeasure& ell);
// Direct route from the adjacency; equal to the locality route for every
// graph (property-tested).
DegreeDistribution degree_distribution(const TypedGraph& graph);

// The type marginal and the sigma-weighted pair marginal. For a graph's
// locality measure these reproduce the type and pair measures exactly.
// Note that the sigma weights are unbounded, so as a map on probability
// measures the second marginal is not continuous under weak convergence;
// exact counts sidestep the issue at finite n.
std::pair<TypeMeasure, PairCountMatrix> locality_marginals(const LocalityMeasure& ell);

// True iff the sigma-weighted marginal of ell matches omega entrywise within
// tol. With tol == 0 and equal totals the comparison is exact integer
// arithmetic. Throws on alphabet mismatch.
bool check_consistency(const PairMeasure& omega, const LocalityMeasure& ell, double tol = 0.0);

// Total variation distance between two locality measures, each normalized by
// its own n. Value in [0, 1].
double tv_distance(const LocalityMeasure& ell, const LocalityMeasure& other);

// Sum over cells of |count difference|; both measures must have the same n.
// tv_distance == l1_count_distance / (2n) in that case, but this form is
// exact.
std::uint64_t l1_count_distance(const LocalityMeasure& ell, const LocalityMeasure& other);

}  // namespace trgg
