#pragma once

// Test-only utilities: a quadratic reference implementation of the radius
// query (kept independent of the grid code it checks) and small random
// generators for property tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "trgg/graph.hpp"
#include "trgg/measures.hpp"
#include "trgg/models.hpp"
#include "trgg/rng.hpp"

namespace trgg::testing {

// O(n^2) oracle: compare every pair against its type radius directly.
inline std::vector<Edge> brute_force_pairs(const std::vector<double>& positions, std::uint32_t dim,
                                           const std::vector<std::uint32_t>& types,
                                           const RadiusTable& radii, bool torus) {
  const std::size_t n = types.size();
  std::vector<Edge> edges;
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
      if (d2 <= r * r) edges.push_back(Edge{i, j});
    }
  }
  return edges;
}

// Random locality measure over a fixed alphabet with totals summing to n.
inline LocalityMeasure random_locality_measure(const TypeAlphabet& alphabet, std::uint64_t n,
                                               Rng& rng) {
  const std::size_t m = alphabet.size();
  LocalityMeasure ell{alphabet, {}, n};
  std::uint64_t remaining = n;
  while (remaining > 0) {
    LocalityCell cell;
    cell.type = static_cast<std::uint32_t>(rng.bounded(m));
    cell.sigma.resize(m);
    for (auto& s : cell.sigma) s = static_cast<std::uint32_t>(rng.bounded(4));
    const std::uint64_t mass = 1 + rng.bounded(remaining);
    ell.counts[cell] += mass;
    remaining -= mass;
  }
  return ell;
}

}  // namespace trgg::testing
