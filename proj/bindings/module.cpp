// Python bindings for the core operations: samplers, empirical measures,
// the allocation coupling, rate functions, and the experiment harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "trgg/allocation.hpp"
#include "trgg/errors.hpp"
#include "trgg/graph.hpp"
#include "trgg/harness.hpp"
#include "trgg/measures.hpp"
#include "trgg/models.hpp"
#include "trgg/rates.hpp"
#include "trgg/rng.hpp"
#include "trgg/table.hpp"
#include "trgg/version.hpp"

namespace py = pybind11;
using namespace trgg;

namespace {

std::vector<double> flatten_matrix(const std::vector<std::vector<double>>& rows,
                                   const char* name) {
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (row.size() != rows.size())
      throw std::invalid_argument(std::string(name) + ": matrix is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

std::vector<std::uint64_t> flatten_counts(const std::vector<std::vector<std::uint64_t>>& rows,
                                          const char* name) {
  std::vector<std::uint64_t> flat;
  for (const auto& row : rows) {
    if (row.size() != rows.size())
      throw std::invalid_argument(std::string(name) + ": matrix is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

using CellTuple = std::tuple<std::uint32_t, std::vector<std::uint32_t>, double>;

LocalityDistribution cells_to_distribution(const std::vector<CellTuple>& cells) {
  LocalityDistribution dist;
  for (const auto& [type, sigma, mass] : cells) dist[LocalityCell{type, sigma}] += mass;
  return dist;
}

py::dict rate_to_dict(const RateEvaluation& eval) {
  py::dict out;
  out["value"] = eval.value;
  out["feasible"] = eval.feasible;
  out["alpha"] = eval.alpha ? py::object(py::float_(*eval.alpha)) : py::none();
  out["truncation_error"] = eval.truncation_error;
  py::dict minimizer;
  for (const auto& [k, v] : eval.minimizer) minimizer[py::int_(k)] = v;
  out["minimizer"] = minimizer;
  return out;
}

}  // namespace

PYBIND11_MODULE(_trgg, m) {
  m.doc() = "Typed random geometric graphs: samplers, empirical measures, rate functions";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);

  py::class_<TypeAlphabet>(m, "TypeAlphabet")
      .def(py::init<std::vector<std::string>>(), py::arg("symbols"))
      .def("__len__", &TypeAlphabet::size)
      .def_property_readonly("symbols", &TypeAlphabet::symbols)
      .def("index", &TypeAlphabet::index)
      .def("__eq__", [](const TypeAlphabet& a, const TypeAlphabet& b) { return a == b; });

  py::class_<TypedGraph>(m, "TypedGraph")
      .def_property_readonly("n", &TypedGraph::node_count)
      .def_property_readonly("dim", &TypedGraph::dim)
      .def_property_readonly("alphabet", &TypedGraph::alphabet)
      .def_property_readonly("types", [](const TypedGraph& g) { return g.types(); })
      .def_property_readonly("edges",
                             [](const TypedGraph& g) {
                               std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
                               out.reserve(g.edge_count());
                               for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
                               return out;
                             })
      .def_property_readonly("positions",
                             [](const TypedGraph& g) {
                               std::vector<std::vector<double>> out(g.node_count());
                               for (std::size_t i = 0; i < g.node_count(); ++i)
                                 out[i].assign(g.position(i), g.position(i) + g.dim());
                               return out;
                             })
      .def("degrees", &TypedGraph::degrees)
      .def("to_json", &TypedGraph::to_json)
      .def_static("from_json", &TypedGraph::from_json)
      .def("to_edge_list", &TypedGraph::to_edge_list);

  py::class_<TypeMeasure>(m, "TypeMeasure")
      .def_readonly("n", &TypeMeasure::n)
      .def_readonly("counts", &TypeMeasure::counts)
      .def_property_readonly("alphabet", [](const TypeMeasure& t) { return t.alphabet; })
      .def("probabilities", &TypeMeasure::probabilities)
      .def("to_json", &TypeMeasure::to_json);
  m.def(
      "make_type_measure",
      [](const TypeAlphabet& alphabet, std::vector<std::uint64_t> counts) {
        return make_type_measure(alphabet, std::move(counts));
      },
      py::arg("alphabet"), py::arg("counts"));

  py::class_<PairMeasure>(m, "PairMeasure")
      .def_readonly("n", &PairMeasure::n)
      .def("pair_count", &PairMeasure::pair_count)
      .def("omega", &PairMeasure::omega)
      .def("mass", &PairMeasure::mass)
      .def("total_edges", &PairMeasure::total_edges)
      .def("to_json", &PairMeasure::to_json);
  m.def(
      "make_pair_measure",
      [](const TypeAlphabet& alphabet, const std::vector<std::vector<std::uint64_t>>& counts,
         std::uint64_t n) {
        return make_pair_measure(alphabet, flatten_counts(counts, "pair counts"), n);
      },
      py::arg("alphabet"), py::arg("counts"), py::arg("n"));

  py::class_<LocalityMeasure>(m, "LocalityMeasure")
      .def_readonly("n", &LocalityMeasure::n)
      .def("cells",
           [](const LocalityMeasure& ell) {
             std::vector<std::tuple<std::uint32_t, std::vector<std::uint32_t>, std::uint64_t>> out;
             for (const auto& [cell, count] : ell.counts)
               out.emplace_back(cell.type, cell.sigma, count);
             return out;
           })
      .def("to_json", &LocalityMeasure::to_json);

  py::class_<DegreeDistribution>(m, "DegreeDistribution")
      .def_readonly("n", &DegreeDistribution::n)
      .def_property_readonly("counts", [](const DegreeDistribution& d) { return d.counts; })
      .def("probability", &DegreeDistribution::probability)
      .def("mean", &DegreeDistribution::mean)
      .def("to_json", &DegreeDistribution::to_json);

  py::class_<PairCountMatrix>(m, "PairCountMatrix")
      .def_readonly("n", &PairCountMatrix::n)
      .def("at", &PairCountMatrix::at)
      .def("symmetric", &PairCountMatrix::symmetric)
      .def("to_pair_measure", &PairCountMatrix::to_pair_measure);

  m.def("empirical_type_measure", &empirical_type_measure);
  m.def("empirical_pair_measure", &empirical_pair_measure);
  m.def("empirical_locality_measure", &empirical_locality_measure);
  m.def("degree_distribution",
        py::overload_cast<const LocalityMeasure&>(&degree_distribution));
  m.def("degree_distribution_from_graph",
        py::overload_cast<const TypedGraph&>(&degree_distribution));
  m.def("locality_marginals", &locality_marginals);
  m.def("check_consistency", &check_consistency, py::arg("omega"), py::arg("ell"),
        py::arg("tol") = 0.0);
  m.def("tv_distance", &tv_distance);
  m.def("l1_count_distance", &l1_count_distance);

  m.def(
      "sample_positions",
      [](std::uint64_t n, std::uint32_t dim, std::uint64_t seed) {
        Rng rng(seed);
        return sample_positions(n, dim, rng);
      },
      py::arg("n"), py::arg("dim"), py::arg("seed"));
  m.def(
      "sample_trgg",
      [](std::uint64_t n, std::uint32_t dim, const TypeAlphabet& alphabet,
         const std::vector<double>& type_law, const std::vector<std::vector<double>>& lambda,
         bool torus, std::uint64_t seed) {
        ModelParams params;
        params.n = n;
        params.dim = dim;
        params.alphabet = alphabet;
        params.type_law = type_law;
        params.lambda = flatten_matrix(lambda, "lambda");
        params.torus = torus;
        params.seed = seed;
        return sample_trgg(params);
      },
      py::arg("n"), py::arg("dim"), py::arg("alphabet"), py::arg("type_law"), py::arg("lambda"),
      py::arg("torus") = false, py::arg("seed") = 0);
  m.def(
      "sample_gnm_geometric",
      [](std::uint64_t n, std::uint32_t dim, std::uint64_t edges, std::uint64_t seed) {
        Rng rng(seed);
        return sample_gnm_geometric(n, dim, edges, rng);
      },
      py::arg("n"), py::arg("dim"), py::arg("edges"), py::arg("seed"));
  m.def(
      "sample_conditional_trgg",
      [](const TypeMeasure& type_counts, const PairMeasure& budgets, std::uint64_t seed,
         std::uint32_t dim) {
        Rng rng(seed);
        return sample_conditional_trgg(type_counts, budgets, rng, dim);
      },
      py::arg("type_counts"), py::arg("pair_budgets"), py::arg("seed"), py::arg("dim") = 2);
  m.def(
      "neighbor_pairs",
      [](const std::vector<std::vector<double>>& positions,
         const std::vector<std::uint32_t>& types, const std::vector<std::vector<double>>& radii,
         bool torus) {
        if (positions.empty()) return std::vector<std::pair<std::uint32_t, std::uint32_t>>{};
        const auto dim = static_cast<std::uint32_t>(positions.front().size());
        std::vector<double> flat;
        for (const auto& p : positions) {
          if (p.size() != dim) throw std::invalid_argument("positions: ragged rows");
          flat.insert(flat.end(), p.begin(), p.end());
        }
        const RadiusTable table(radii.size(), flatten_matrix(radii, "radii"));
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        for (const auto& e : neighbor_pairs(flat, dim, types, table, torus))
          out.emplace_back(e.u, e.v);
        return out;
      },
      py::arg("positions"), py::arg("types"), py::arg("radii"), py::arg("torus") = false);

  py::class_<AllocationOutcome>(m, "AllocationOutcome")
      .def_readonly("occupancy", &AllocationOutcome::occupancy)
      .def_readonly("graph", &AllocationOutcome::graph)
      .def("mismatch", &AllocationOutcome::mismatch)
      .def("mismatch_total", &AllocationOutcome::mismatch_total)
      .def("tv_bound", &AllocationOutcome::tv_bound);

  py::class_<PairCollisionSchedule>(m, "PairCollisionSchedule")
      .def_readonly("a", &PairCollisionSchedule::a)
      .def_readonly("b", &PairCollisionSchedule::b)
      .def_readonly("steps", &PairCollisionSchedule::steps)
      .def_readonly("probabilities", &PairCollisionSchedule::probabilities)
      .def_readonly("expected_mismatches", &PairCollisionSchedule::expected_mismatches)
      .def_readonly("variance_rate", &PairCollisionSchedule::variance_rate);

  m.def(
      "run_allocation_coupling",
      [](const TypeMeasure& type_counts, const PairMeasure& budgets, std::uint64_t seed,
         std::uint32_t dim) {
        Rng rng(seed);
        return run_allocation_coupling(type_counts, budgets, rng, dim);
      },
      py::arg("type_counts"), py::arg("pair_budgets"), py::arg("seed"), py::arg("dim") = 2);
  m.def("collision_schedule",
        [](const TypeMeasure& type_counts, const PairMeasure& budgets) {
          return collision_schedule(type_counts, budgets).pairs;
        });
  m.def("bennett_h", &bennett_h);
  m.def("bennett_tail_bound", &bennett_tail_bound, py::arg("schedule"), py::arg("threshold"));

  m.def("unit_ball_volume", &unit_ball_volume);
  m.def("poisson_pmf", &poisson_pmf);
  m.def("relative_entropy",
        [](const std::map<std::int64_t, double>& p, const std::map<std::int64_t, double>& q) {
          return relative_entropy(p, q);
        });
  m.def(
      "locality_rate",
      [](const TypeAlphabet& alphabet, const std::vector<double>& type_law,
         const std::vector<std::vector<double>>& omega, const std::vector<CellTuple>& cells) {
        return rate_to_dict(locality_rate(alphabet, type_law, flatten_matrix(omega, "omega"),
                                          cells_to_distribution(cells)));
      },
      py::arg("alphabet"), py::arg("type_law"), py::arg("omega"), py::arg("ell"));
  m.def(
      "degree_rate",
      [](const std::map<std::uint64_t, double>& delta, std::uint32_t d, double t) {
        return rate_to_dict(degree_rate(delta, d, t));
      },
      py::arg("delta"), py::arg("d"), py::arg("t"));
  m.def("solve_detached_alpha", &solve_detached_alpha, py::arg("y"), py::arg("mu"));
  m.def(
      "detached_rate",
      [](double y, std::uint32_t d, double t) { return rate_to_dict(detached_rate(y, d, t)); },
      py::arg("y"), py::arg("d"), py::arg("t"));
  m.def("detached_rate_oracle", &detached_rate_oracle, py::arg("y"), py::arg("mu"), py::arg("K"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, unsigned threads, const std::string& format) {
        auto config = ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        if (threads > 0) config.threads = threads;
        return emit_results(run_experiment(config), parse_table_format(format));
      },
      py::arg("config_json"), py::arg("threads") = 0, py::arg("format") = std::string("json"),
      "Run a harness experiment from a JSON config string; returns the table as csv or json");
}
