#include "trgg/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "trgg/errors.hpp"

namespace trgg {

namespace {

std::uint64_t pair_key(std::uint64_t n, std::uint32_t u, std::uint32_t v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * n + v;
}

std::uint64_t unordered_pool_size(std::uint64_t count) { return count * (count - 1) / 2; }

}  // namespace

RadiusTable::RadiusTable(std::size_t types, double uniform_radius)
    : RadiusTable(types, std::vector<double>(types * types, uniform_radius)) {}

RadiusTable::RadiusTable(std::size_t types, std::vector<double> matrix)
    : types_(types), matrix_(std::move(matrix)), max_radius_(0.0) {
  if (types_ == 0) throw std::invalid_argument("radius table: no types");
  if (matrix_.size() != types_ * types_)
    throw std::invalid_argument("radius table: matrix size does not match type count");
  for (std::size_t a = 0; a < types_; ++a) {
    for (std::size_t b = 0; b < types_; ++b) {
      const double r = matrix_[a * types_ + b];
      if (!(r >= 0.0)) throw std::invalid_argument("radius table: radius must be nonnegative");
      if (matrix_[a * types_ + b] != matrix_[b * types_ + a])
        throw std::invalid_argument("radius table: matrix is not symmetric");
      max_radius_ = std::max(max_radius_, r);
    }
  }
  if (max_radius_ <= 0.0)
    throw std::invalid_argument("radius table: at least one radius must be positive");
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("model: n must be at least 1");
  if (dim < 1) throw std::invalid_argument("model: dim must be at least 1");
  const std::size_t m = alphabet.size();
  if (m == 0) throw std::invalid_argument("model: empty alphabet");
  if (type_law.size() != m)
    throw std::invalid_argument("model: type law size does not match alphabet");
  double total = 0.0;
  for (double p : type_law) {
    if (!(p >= 0.0)) throw std::invalid_argument("model: type law entries must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("model: type law must sum to 1");
  if (lambda.size() != m * m)
    throw std::invalid_argument("model: lambda size does not match alphabet");
  double lambda_max = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double l = lambda[a * m + b];
      if (!(l >= 0.0)) throw std::invalid_argument("model: lambda entries must be nonnegative");
      if (std::abs(l - lambda[b * m + a]) > 1e-12 * std::max(1.0, std::abs(l)))
        throw std::invalid_argument("model: lambda must be symmetric");
      lambda_max = std::max(lambda_max, l);
    }
  }
  if (lambda_max <= 0.0)
    throw std::invalid_argument("model: lambda must not be identically zero");
}

RadiusTable ModelParams::link_radii() const {
  const std::size_t m = alphabet.size();
  std::vector<double> r(m * m, 0.0);
  for (std::size_t i = 0; i < m * m; ++i) {
    if (lambda[i] > 0.0)
      r[i] = std::min(std::pow(lambda[i] / static_cast<double>(n), 1.0 / dim), 1.0);
  }
  return RadiusTable(m, std::move(r));
}

std::vector<double> sample_positions(std::uint64_t n, std::uint32_t dim, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_positions: n must be at least 1");
  if (dim < 1) throw std::invalid_argument("sample_positions: dim must be at least 1");
  std::vector<double> points(n * dim);
  for (auto& x : points) x = rng.next_double();
  return points;
}

std::vector<Edge> neighbor_pairs(const std::vector<double>& positions, std::uint32_t dim,
                                 const std::vector<std::uint32_t>& types, const RadiusTable& radii,
                                 bool torus) {
  if (dim < 1) throw std::invalid_argument("neighbor_pairs: dim must be at least 1");
  if (positions.size() != types.size() * dim)
    throw std::invalid_argument("neighbor_pairs: positions size does not match types");
  const std::size_t n = types.size();
  std::vector<Edge> edges;
  if (n < 2) return edges;
  for (std::uint32_t t : types)
    if (t >= radii.types()) throw std::invalid_argument("neighbor_pairs: type index out of range");

  // One grid for all type pairs: cell side >= the maximum radius, so any
  // admissible pair lives in adjacent cells.
  const double side = radii.max_radius();
  const std::uint64_t cells_per_dim =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(1.0 / side)));

  auto cell_coord = [&](double x) {
    auto c = static_cast<std::uint64_t>(x * static_cast<double>(cells_per_dim));
    return std::min(c, cells_per_dim - 1);
  };
  auto cell_key = [&](const std::vector<std::uint64_t>& coords) {
    std::uint64_t key = 0;
    for (std::uint32_t k = 0; k < dim; ++k) key = key * cells_per_dim + coords[k];
    return key;
  };

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  buckets.reserve(n * 2);
  std::vector<std::uint64_t> coords(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < dim; ++k) coords[k] = cell_coord(positions[i * dim + k]);
    buckets[cell_key(coords)].push_back(static_cast<std::uint32_t>(i));
  }

  auto sq_distance = [&](std::size_t i, std::size_t j) {
    double d2 = 0.0;
    for (std::uint32_t k = 0; k < dim; ++k) {
      double dx = std::abs(positions[i * dim + k] - positions[j * dim + k]);
      if (torus) dx = std::min(dx, 1.0 - dx);
      d2 += dx * dx;
    }
    return d2;
  };

  std::vector<int> offset(dim, -1);
  std::vector<std::uint64_t> target(dim);
  std::vector<std::uint64_t> keys;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < dim; ++k) coords[k] = cell_coord(positions[i * dim + k]);
    keys.clear();
    std::fill(offset.begin(), offset.end(), -1);
    // Odometer over the 3^d neighbourhood.
    while (true) {
      bool in_range = true;
      for (std::uint32_t k = 0; k < dim && in_range; ++k) {
        const std::int64_t c = static_cast<std::int64_t>(coords[k]) + offset[k];
        if (torus) {
          target[k] = static_cast<std::uint64_t>((c + static_cast<std::int64_t>(cells_per_dim)) %
                                                 static_cast<std::int64_t>(cells_per_dim));
        } else if (c < 0 || c >= static_cast<std::int64_t>(cells_per_dim)) {
          in_range = false;
        } else {
          target[k] = static_cast<std::uint64_t>(c);
        }
      }
      if (in_range) keys.push_back(cell_key(target));
      std::uint32_t k = 0;
      for (; k < dim; ++k) {
        if (offset[k] < 1) {
          ++offset[k];
          break;
        }
        offset[k] = -1;
      }
      if (k == dim) break;
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    for (std::uint64_t key : keys) {
      auto it = buckets.find(key);
      if (it == buckets.end()) continue;
      for (std::uint32_t j : it->second) {
        if (j <= i) continue;
        const double r = radii(types[i], types[j]);
        if (r <= 0.0) continue;
        if (sq_distance(i, j) <= r * r)
          edges.push_back(Edge{static_cast<std::uint32_t>(i), j});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

TypedGraph sample_trgg(const ModelParams& params) {
  params.validate();
  Rng rng(params.seed);
  auto positions = sample_positions(params.n, params.dim, rng);

  std::vector<double> cdf(params.type_law.size());
  double acc = 0.0;
  for (std::size_t a = 0; a < cdf.size(); ++a) {
    acc += params.type_law[a];
    cdf[a] = acc;
  }
  std::vector<std::uint32_t> types(params.n);
  for (auto& t : types) {
    const double u = rng.next_double();
    std::uint32_t a = 0;
    while (a + 1 < cdf.size() && u >= cdf[a]) ++a;
    t = a;
  }

  auto edges = neighbor_pairs(positions, params.dim, types, params.link_radii(), params.torus);
  return TypedGraph(params.dim, params.alphabet, std::move(positions), std::move(types),
                    std::move(edges));
}

TypedGraph sample_gnm_geometric(std::uint64_t n, std::uint32_t dim, std::uint64_t edge_count,
                                Rng& rng) {
  if (n < 1) throw std::invalid_argument("gnm: n must be at least 1");
  const std::uint64_t pool = unordered_pool_size(n);
  if (edge_count > pool) throw InfeasibleError("gnm: edge count exceeds pair count");
  auto positions = sample_positions(n, dim, rng);

  std::vector<Edge> edges;
  edges.reserve(edge_count);
  if (edge_count > 0 && 2 * edge_count <= pool) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(edge_count * 2);
    while (chosen.size() < edge_count) {
      const auto u = static_cast<std::uint32_t>(rng.bounded(n));
      const auto v = static_cast<std::uint32_t>(rng.bounded(n));
      if (u == v) continue;
      if (chosen.insert(pair_key(n, u, v)).second)
        edges.push_back(Edge{std::min(u, v), std::max(u, v)});
    }
  } else if (edge_count > 0) {
    // Dense budget: reservoir selection over the enumerated pool.
    std::uint64_t seen = 0;
    for (std::uint32_t u = 0; u + 1 < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        if (seen < edge_count) {
          edges.push_back(Edge{u, v});
        } else {
          const std::uint64_t r = rng.bounded(seen + 1);
          if (r < edge_count) edges[r] = Edge{u, v};
        }
        ++seen;
      }
    }
  }
  std::vector<std::uint32_t> types(n, 0);
  return TypedGraph(dim, TypeAlphabet::untyped(), std::move(positions), std::move(types),
                    std::move(edges));
}

void check_pair_feasibility(const TypeMeasure& type_counts, const PairMeasure& pair_budgets) {
  if (type_counts.alphabet != pair_budgets.alphabet)
    throw std::invalid_argument("conditional sampler: alphabet mismatch");
  if (type_counts.n != pair_budgets.n)
    throw std::invalid_argument("conditional sampler: totals differ");
  const std::size_t m = type_counts.alphabet.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const std::uint64_t pool = (a == b) ? unordered_pool_size(type_counts.counts[a])
                                          : type_counts.counts[a] * type_counts.counts[b];
      if (pair_budgets.pair_count(a, b) > pool)
        throw InfeasibleError("pair budget exceeds pool for (" + type_counts.alphabet.symbol(a) +
                              ", " + type_counts.alphabet.symbol(b) + ")");
    }
  }
}

TypedGraph sample_conditional_trgg(const TypeMeasure& type_counts, const PairMeasure& pair_budgets,
                                   Rng& rng, std::uint32_t dim) {
  check_pair_feasibility(type_counts, pair_budgets);
  const std::uint64_t n = type_counts.n;
  const std::size_t m = type_counts.alphabet.size();
  auto positions = sample_positions(n, dim, rng);

  // Uniform permutation of the prescribed type multiset.
  std::vector<std::uint32_t> types;
  types.reserve(n);
  for (std::size_t a = 0; a < m; ++a)
    types.insert(types.end(), type_counts.counts[a], static_cast<std::uint32_t>(a));
  for (std::uint64_t i = n - 1; i > 0; --i)
    std::swap(types[i], types[rng.bounded(i + 1)]);

  std::vector<std::vector<std::uint32_t>> members(m);
  for (std::uint32_t i = 0; i < n; ++i) members[types[i]].push_back(i);

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> chosen;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const std::uint64_t budget = pair_budgets.pair_count(a, b);
      if (budget == 0) continue;
      const auto& wa = members[a];
      const auto& wb = members[b];
      const std::uint64_t pool =
          (a == b) ? unordered_pool_size(wa.size()) : static_cast<std::uint64_t>(wa.size()) * wb.size();
      if (2 * budget <= pool) {
        std::uint64_t added = 0;
        while (added < budget) {
          const std::uint32_t u = wa[rng.pick_index(wa.size())];
          const std::uint32_t v = wb[rng.pick_index(wb.size())];
          if (u == v) continue;
          if (!chosen.insert(pair_key(n, u, v)).second) continue;
          edges.push_back(Edge{std::min(u, v), std::max(u, v)});
          ++added;
        }
      } else {
        // Reservoir selection over the enumerated eligible pool.
        std::vector<Edge> reservoir;
        reservoir.reserve(budget);
        std::uint64_t seen = 0;
        auto offer = [&](std::uint32_t u, std::uint32_t v) {
          const Edge e{std::min(u, v), std::max(u, v)};
          if (seen < budget) {
            reservoir.push_back(e);
          } else {
            const std::uint64_t r = rng.bounded(seen + 1);
            if (r < budget) reservoir[r] = e;
          }
          ++seen;
        };
        if (a == b) {
          for (std::size_t i = 0; i + 1 < wa.size(); ++i)
            for (std::size_t j = i + 1; j < wa.size(); ++j) offer(wa[i], wa[j]);
        } else {
          for (std::uint32_t u : wa)
            for (std::uint32_t v : wb) offer(u, v);
        }
        for (const Edge& e : reservoir) {
          chosen.insert(pair_key(n, e.u, e.v));
          edges.push_back(e);
        }
      }
    }
  }
  return TypedGraph(dim, type_counts.alphabet, std::move(positions), std::move(types),
                    std::move(edges));
}

}  // namespace trgg
