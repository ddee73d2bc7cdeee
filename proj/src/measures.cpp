#include "trgg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace trgg {

namespace {

void require_nonempty(const TypedGraph& graph) {
  if (graph.node_count() == 0) throw std::invalid_argument("empty graph");
}

nlohmann::json alphabet_json(const TypeAlphabet& alphabet) {
  return nlohmann::json(alphabet.symbols());
}

}  // namespace

std::vector<double> TypeMeasure::probabilities() const {
  std::vector<double> p(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) p[a] = probability(a);
  return p;
}

TypeMeasure make_type_measure(TypeAlphabet alphabet, std::vector<std::uint64_t> counts) {
  if (counts.size() != alphabet.size())
    throw std::invalid_argument("type measure: counts size does not match alphabet");
  const std::uint64_t n = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (n == 0) throw std::invalid_argument("type measure: total count must be positive");
  return TypeMeasure{std::move(alphabet), std::move(counts), n};
}

std::uint64_t PairMeasure::total_edges() const {
  const std::size_t m = alphabet.size();
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) total += pair_count(a, b);
  return total;
}

double PairMeasure::mass() const {
  return 2.0 * static_cast<double>(total_edges()) / static_cast<double>(n);
}

PairMeasure make_pair_measure(TypeAlphabet alphabet, std::vector<std::uint64_t> edge_counts,
                              std::uint64_t n) {
  const std::size_t m = alphabet.size();
  if (edge_counts.size() != m * m)
    throw std::invalid_argument("pair measure: count matrix size does not match alphabet");
  if (n == 0) throw std::invalid_argument("pair measure: node count must be positive");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (edge_counts[a * m + b] != edge_counts[b * m + a])
        throw std::invalid_argument("pair measure: count matrix is not symmetric");
  return PairMeasure{std::move(alphabet), std::move(edge_counts), n};
}

double DegreeDistribution::probability(std::uint64_t degree) const {
  auto it = counts.find(degree);
  if (it == counts.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(n);
}

double DegreeDistribution::mean() const {
  double total = 0.0;
  for (const auto& [r, c] : counts) total += static_cast<double>(r) * static_cast<double>(c);
  return total / static_cast<double>(n);
}

bool PairCountMatrix::symmetric() const {
  const std::size_t m = alphabet.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (counts[a * m + b] != counts[b * m + a]) return false;
  return true;
}

PairMeasure PairCountMatrix::to_pair_measure() const {
  if (!symmetric())
    throw std::invalid_argument("pair marginal: matrix is not symmetric");
  const std::size_t m = alphabet.size();
  std::vector<std::uint64_t> edge_counts(m * m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    if (counts[a * m + a] % 2 != 0)
      throw std::invalid_argument("pair marginal: odd diagonal entry");
    edge_counts[a * m + a] = counts[a * m + a] / 2;
    for (std::size_t b = a + 1; b < m; ++b) {
      edge_counts[a * m + b] = counts[a * m + b];
      edge_counts[b * m + a] = counts[a * m + b];
    }
  }
  return make_pair_measure(alphabet, std::move(edge_counts), n);
}

TypeMeasure empirical_type_measure(const TypedGraph& graph) {
  require_nonempty(graph);
  std::vector<std::uint64_t> counts(graph.alphabet().size(), 0);
  for (std::uint32_t t : graph.types()) ++counts[t];
  return TypeMeasure{graph.alphabet(), std::move(counts), graph.node_count()};
}

PairMeasure empirical_pair_measure(const TypedGraph& graph) {
  require_nonempty(graph);
  const std::size_t m = graph.alphabet().size();
  std::vector<std::uint64_t> counts(m * m, 0);
  for (const auto& e : graph.edges()) {
    const std::uint32_t a = graph.types()[e.u];
    const std::uint32_t b = graph.types()[e.v];
    ++counts[a * m + b];
    if (a != b) ++counts[b * m + a];
  }
  return PairMeasure{graph.alphabet(), std::move(counts), graph.node_count()};
}

LocalityMeasure empirical_locality_measure(const TypedGraph& graph) {
  require_nonempty(graph);
  const std::size_t n = graph.node_count();
  const std::size_t m = graph.alphabet().size();
  std::vector<std::uint32_t> sigma(n * m, 0);
  for (const auto& e : graph.edges()) {
    ++sigma[e.u * m + graph.types()[e.v]];
    ++sigma[e.v * m + graph.types()[e.u]];
  }
  LocalityMeasure ell{graph.alphabet(), {}, n};
  LocalityCell cell;
  cell.sigma.resize(m);
  for (std::size_t i = 0; i < n; ++i) {
    cell.type = graph.types()[i];
    for (std::size_t b = 0; b < m; ++b) cell.sigma[b] = sigma[i * m + b];
    ++ell.counts[cell];
  }
  return ell;
}

DegreeDistribution degree_distribution(const LocalityMeasure& ell) {
  DegreeDistribution d{{}, ell.n};
  for (const auto& [cell, count] : ell.counts) {
    std::uint64_t r = 0;
    for (std::uint32_t s : cell.sigma) r += s;
    d.counts[r] += count;
  }
  return d;
}

DegreeDistribution degree_distribution(const TypedGraph& graph) {
  require_nonempty(graph);
  DegreeDistribution d{{}, graph.node_count()};
  for (std::uint64_t r : graph.degrees()) ++d.counts[r];
  return d;
}

std::pair<TypeMeasure, PairCountMatrix> locality_marginals(const LocalityMeasure& ell) {
  const std::size_t m = ell.alphabet.size();
  std::vector<std::uint64_t> type_counts(m, 0);
  std::vector<std::uint64_t> incidence(m * m, 0);
  for (const auto& [cell, count] : ell.counts) {
    type_counts[cell.type] += count;
    for (std::size_t b = 0; b < m; ++b)
      incidence[cell.type * m + b] += count * static_cast<std::uint64_t>(cell.sigma[b]);
  }
  TypeMeasure first{ell.alphabet, std::move(type_counts), ell.n};
  PairCountMatrix second{ell.alphabet, std::move(incidence), ell.n};
  return {std::move(first), std::move(second)};
}

bool check_consistency(const PairMeasure& omega, const LocalityMeasure& ell, double tol) {
  if (omega.alphabet != ell.alphabet)
    throw std::invalid_argument("check_consistency: alphabet mismatch");
  if (tol < 0.0) throw std::invalid_argument("check_consistency: negative tolerance");
  const std::size_t m = omega.alphabet.size();
  const PairCountMatrix h2 = locality_marginals(ell).second;
  const bool exact = (tol == 0.0) && (h2.n == omega.n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const std::uint64_t expected = (a == b ? 2 : 1) * omega.pair_count(a, b);
      if (exact) {
        if (h2.at(a, b) != expected) return false;
      } else {
        const double lhs = static_cast<double>(h2.at(a, b)) / static_cast<double>(h2.n);
        const double rhs = omega.omega(a, b);
        if (std::abs(lhs - rhs) > tol) return false;
      }
    }
  }
  return true;
}

double tv_distance(const LocalityMeasure& ell, const LocalityMeasure& other) {
  if (ell.alphabet != other.alphabet)
    throw std::invalid_argument("tv_distance: alphabet mismatch");
  const double na = static_cast<double>(ell.n);
  const double nb = static_cast<double>(other.n);
  double sum = 0.0;
  auto ia = ell.counts.begin();
  auto ib = other.counts.begin();
  while (ia != ell.counts.end() || ib != other.counts.end()) {
    if (ib == other.counts.end() || (ia != ell.counts.end() && ia->first < ib->first)) {
      sum += static_cast<double>(ia->second) / na;
      ++ia;
    } else if (ia == ell.counts.end() || ib->first < ia->first) {
      sum += static_cast<double>(ib->second) / nb;
      ++ib;
    } else {
      sum += std::abs(static_cast<double>(ia->second) / na - static_cast<double>(ib->second) / nb);
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, 0.5 * sum);
}

std::uint64_t l1_count_distance(const LocalityMeasure& ell, const LocalityMeasure& other) {
  if (ell.alphabet != other.alphabet)
    throw std::invalid_argument("l1_count_distance: alphabet mismatch");
  if (ell.n != other.n)
    throw std::invalid_argument("l1_count_distance: totals differ");
  std::uint64_t sum = 0;
  auto ia = ell.counts.begin();
  auto ib = other.counts.begin();
  while (ia != ell.counts.end() || ib != other.counts.end()) {
    if (ib == other.counts.end() || (ia != ell.counts.end() && ia->first < ib->first)) {
      sum += ia->second;
      ++ia;
    } else if (ia == ell.counts.end() || ib->first < ia->first) {
      sum += ib->second;
      ++ib;
    } else {
      sum += ia->second > ib->second ? ia->second - ib->second : ib->second - ia->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

// --- JSON ------------------------------------------------------------------

std::string TypeMeasure::to_json() const {
  nlohmann::json j;
  j["alphabet"] = alphabet_json(alphabet);
  j["counts"] = counts;
  j["n"] = n;
  return j.dump();
}

TypeMeasure TypeMeasure::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TypeAlphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
  auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
  auto measure = make_type_measure(std::move(alphabet), std::move(counts));
  if (measure.n != j.at("n").get<std::uint64_t>())
    throw std::invalid_argument("type measure: stored n does not match counts");
  return measure;
}

std::string PairMeasure::to_json() const {
  const std::size_t m = alphabet.size();
  nlohmann::json j;
  j["alphabet"] = alphabet_json(alphabet);
  j["n"] = n;
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b)
      if (pair_count(a, b) > 0) pairs.push_back({a, b, pair_count(a, b)});
  j["pairs"] = std::move(pairs);
  return j.dump();
}

PairMeasure PairMeasure::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TypeAlphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
  const std::size_t m = alphabet.size();
  std::vector<std::uint64_t> counts(m * m, 0);
  for (const auto& entry : j.at("pairs")) {
    const auto a = entry.at(0).get<std::size_t>();
    const auto b = entry.at(1).get<std::size_t>();
    const auto c = entry.at(2).get<std::uint64_t>();
    if (a >= m || b >= m) throw std::invalid_argument("pair measure: index out of range");
    counts[a * m + b] = c;
    counts[b * m + a] = c;
  }
  return make_pair_measure(std::move(alphabet), std::move(counts), j.at("n").get<std::uint64_t>());
}

std::string LocalityMeasure::to_json() const {
  nlohmann::json j;
  j["alphabet"] = alphabet_json(alphabet);
  j["n"] = n;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [cell, count] : counts) cells.push_back({cell.type, cell.sigma, count});
  j["cells"] = std::move(cells);
  return j.dump();
}

LocalityMeasure LocalityMeasure::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  LocalityMeasure ell;
  ell.alphabet = TypeAlphabet(j.at("alphabet").get<std::vector<std::string>>());
  ell.n = j.at("n").get<std::uint64_t>();
  std::uint64_t total = 0;
  for (const auto& entry : j.at("cells")) {
    LocalityCell cell;
    cell.type = entry.at(0).get<std::uint32_t>();
    cell.sigma = entry.at(1).get<std::vector<std::uint32_t>>();
    if (cell.type >= ell.alphabet.size() || cell.sigma.size() != ell.alphabet.size())
      throw std::invalid_argument("locality measure: malformed cell");
    const auto count = entry.at(2).get<std::uint64_t>();
    ell.counts[cell] += count;
    total += count;
  }
  if (total != ell.n) throw std::invalid_argument("locality measure: stored n does not match counts");
  return ell;
}

std::string DegreeDistribution::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  nlohmann::json degrees = nlohmann::json::array();
  for (const auto& [r, c] : counts) degrees.push_back({r, c});
  j["degrees"] = std::move(degrees);
  return j.dump();
}

DegreeDistribution DegreeDistribution::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  DegreeDistribution d;
  d.n = j.at("n").get<std::uint64_t>();
  std::uint64_t total = 0;
  for (const auto& entry : j.at("degrees")) {
    const auto r = entry.at(0).get<std::uint64_t>();
    const auto c = entry.at(1).get<std::uint64_t>();
    d.counts[r] += c;
    total += c;
  }
  if (total != d.n) throw std::invalid_argument("degree distribution: stored n does not match counts");
  return d;
}

}  // namespace trgg
