#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trgg/alphabet.hpp"

namespace trgg {

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected typed graph over points in the unit cube [0,1]^d. Immutable
// after construction. Edges are kept canonical: u < v, sorted ascending,
// no duplicates, no self-loops.
class TypedGraph {
 public:
  TypedGraph(std::uint32_t dim, TypeAlphabet alphabet, std::vector<double> positions,
             std::vector<std::uint32_t> types, std::vector<Edge> edges);

  std::size_t node_count() const { return types_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::uint32_t dim() const { return dim_; }
  const TypeAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::uint32_t>& types() const { return types_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Row-major, node_count() x dim().
  const std::vector<double>& positions() const { return positions_; }
  const double* position(std::size_t i) const { return positions_.data() + i * dim_; }

  std::vector<std::uint64_t> degrees() const;

  // Canonical JSON: dim, alphabet, positions, types, edge list. Serializing
  // the same graph twice yields identical bytes.
  std::string to_json() const;
  static TypedGraph from_json(const std::string& text);

  // Plain text edge list: first line "<n> <d>", then one "u v" pair per line.
  std::string to_edge_list() const;

 private:
  std::uint32_t dim_;
  TypeAlphabet alphabet_;
  std::vector<double> positions_;
  std::vector<std::uint32_t> types_;
  std::vector<Edge> edges_;
};

}  // namespace trgg
