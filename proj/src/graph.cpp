#include "trgg/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace trgg {

TypedGraph::TypedGraph(std::uint32_t dim, TypeAlphabet alphabet, std::vector<double> positions,
                       std::vector<std::uint32_t> types, std::vector<Edge> edges)
    : dim_(dim),
      alphabet_(std::move(alphabet)),
      positions_(std::move(positions)),
      types_(std::move(types)),
      edges_(std::move(edges)) {
  if (dim_ < 1) throw std::invalid_argument("graph: dimension must be at least 1");
  if (alphabet_.size() == 0) throw std::invalid_argument("graph: empty alphabet");
  const std::size_t n = types_.size();
  if (positions_.size() != n * dim_)
    throw std::invalid_argument("graph: positions size does not match node count");
  for (double x : positions_)
    if (!(x >= 0.0 && x <= 1.0))
      throw std::invalid_argument("graph: position outside the unit cube");
  for (std::uint32_t t : types_)
    if (t >= alphabet_.size()) throw std::invalid_argument("graph: type index out of range");
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("graph: self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= n) throw std::invalid_argument("graph: edge endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("graph: duplicate edge");
}

std::vector<std::uint64_t> TypedGraph::degrees() const {
  std::vector<std::uint64_t> deg(node_count(), 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::string TypedGraph::to_json() const {
  nlohmann::json j;
  j["dim"] = dim_;
  j["alphabet"] = alphabet_.symbols();
  j["types"] = types_;
  nlohmann::json pos = nlohmann::json::array();
  for (std::size_t i = 0; i < node_count(); ++i) {
    nlohmann::json p = nlohmann::json::array();
    for (std::uint32_t k = 0; k < dim_; ++k) p.push_back(position(i)[k]);
    pos.push_back(std::move(p));
  }
  j["positions"] = std::move(pos);
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : edges_) es.push_back({e.u, e.v});
  j["edges"] = std::move(es);
  return j.dump();
}

TypedGraph TypedGraph::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const auto dim = j.at("dim").get<std::uint32_t>();
  TypeAlphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
  auto types = j.at("types").get<std::vector<std::uint32_t>>();
  std::vector<double> positions;
  for (const auto& p : j.at("positions"))
    for (const auto& x : p) positions.push_back(x.get<double>());
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back(Edge{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>()});
  return TypedGraph(dim, std::move(alphabet), std::move(positions), std::move(types),
                    std::move(edges));
}

std::string TypedGraph::to_edge_list() const {
  std::ostringstream out;
  out << node_count() << ' ' << dim_ << '\n';
  for (const auto& e : edges_) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

}  // namespace trgg
