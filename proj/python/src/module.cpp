#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mobility/analysis.hpp"
#include "mobility/errors.hpp"
#include "mobility/event_stream.hpp"
#include "mobility/io.hpp"
#include "mobility/optimizer.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/taxonomy.hpp"
#include "mobility/windowing.hpp"

namespace py = pybind11;
using namespace mobility;

namespace {

py::object to_python(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_python(v));
      return out;
    }
    default: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
  }
}

FormatSpec make_format(const std::string& columns, const std::string& delimiter,
                       const std::string& comment, bool has_header) {
  FormatSpec f = FormatSpec::from_columns(columns);
  f.delimiter = parse_delimiter(delimiter);
  f.comment_prefix = comment;
  f.has_header = has_header;
  return f;
}

py::list taxonomy(const EventStream& s, const std::string& axis_name,
                  const std::string& degree, const std::vector<std::string>& windows,
                  std::size_t workers) {
  const TimeAxis axis = parse_time_axis(axis_name);
  WindowSchedule schedule;
  if (windows.empty()) {
    schedule = paper_schedule(s, axis);
  } else {
    const int decimals = axis == TimeAxis::kTimestamp ? s.time_decimals() : 0;
    std::vector<WindowTriple> triples;
    for (const auto& w : windows) triples.push_back(parse_window_triple(w, decimals));
    schedule = custom_schedule(triples, axis);
  }
  const auto records = run_schedule(s, schedule, parse_degree_mode(degree), workers);
  return to_python(taxonomy_json(records, axis == TimeAxis::kTimestamp ? s.time_decimals() : 0));
}

OptimizerConfig growth_config(std::size_t seed_nodes, std::size_t slices,
                              std::size_t slice_nodes, std::uint64_t rng_seed) {
  OptimizerConfig c;
  c.seed_nodes = seed_nodes;
  c.slices = slices;
  c.slice_nodes = slice_nodes;
  c.rng_seed = rng_seed;
  return c;
}

ModelKind model_from(const std::string& name) {
  const auto m = find_model(name);
  if (!m) throw ConfigError("unknown model '" + name + "'");
  return *m;
}

Statistic statistic_from(const std::string& name) {
  const auto s = find_statistic(name);
  if (!s) throw ConfigError("unknown statistic '" + name + "'");
  return *s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mobility taxonomy of temporal networks";
  m.attr("__version__") = std::string(kVersion);

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", input.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<ComputationError>(m, "ComputationError", error.ptr());

  py::class_<EventStream>(m, "EventStream")
      .def_static(
          "from_pairs",
          [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
             const std::vector<Timestamp>& times) {
            if (pairs.size() != times.size()) {
              throw InputError("pairs and times differ in length");
            }
            return EventStream::from_pairs(pairs, times);
          },
          py::arg("pairs"), py::arg("times"))
      .def_property_readonly("node_count", &EventStream::node_count)
      .def_property_readonly("event_count", &EventStream::event_count)
      .def_property_readonly("iteration_count", &EventStream::iteration_count)
      .def_property_readonly("time_decimals", &EventStream::time_decimals)
      .def_property_readonly("self_loops_dropped", &EventStream::self_loops_dropped)
      .def("events",
           [](const EventStream& s) {
             py::list out;
             for (std::size_t i = 0; i < s.event_count(); ++i) {
               const auto& e = s.events()[i];
               out.append(py::make_tuple(s.labels().label(e.u), s.labels().label(e.v), e.t,
                                         s.iterations()[i]));
             }
             return out;
           },
           "(u_label, v_label, timestamp, iteration) per event")
      .def("__len__", &EventStream::event_count);

  m.def(
      "parse_edge_list",
      [](const std::string& text, const std::string& columns, const std::string& delimiter,
         const std::string& comment, bool has_header) {
        return parse_edge_list(text, make_format(columns, delimiter, comment, has_header));
      },
      py::arg("text"), py::arg("columns") = "src,dst,time", py::arg("delimiter") = "whitespace",
      py::arg("comment") = "#", py::arg("has_header") = false);
  m.def(
      "read_edge_list",
      [](const std::string& path, const std::string& columns, const std::string& delimiter,
         const std::string& comment, bool has_header) {
        return read_edge_list(path, make_format(columns, delimiter, comment, has_header));
      },
      py::arg("path"), py::arg("columns") = "src,dst,time", py::arg("delimiter") = "whitespace",
      py::arg("comment") = "#", py::arg("has_header") = false);

  m.def("taxonomy", &taxonomy, py::arg("stream"), py::arg("axis") = "events",
        py::arg("degree") = "binary", py::arg("windows") = std::vector<std::string>{},
        py::arg("workers") = 1,
        "Six correlations per window pair; degenerate values are None");

  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
      py::arg("x"), py::arg("y"));
  m.def(
      "gini", [](const std::vector<double>& x) { return gini(x); }, py::arg("values"));

  m.def(
      "pca_fit",
      [](const std::vector<TaxonomyRow>& rows) {
        const PcaModel p = pca_fit(rows);
        py::dict out;
        out["mean"] = p.mean;
        out["components"] = p.components;
        out["eigenvalues"] = p.eigenvalues;
        out["rows_used"] = p.rows_used;
        out["rows_excluded"] = p.rows_excluded;
        return out;
      },
      py::arg("rows"), "Rows of six statistics; rows containing None are excluded");

  m.def(
      "generate",
      [](const std::string& model, std::size_t seed_nodes, std::size_t slices,
         std::size_t slice_nodes, std::uint64_t rng_seed) {
        const GrowthState g = generate_network(
            model_from(model), growth_config(seed_nodes, slices, slice_nodes, rng_seed));
        std::vector<std::tuple<NodeId, NodeId, std::uint64_t>> out;
        out.reserve(g.events().size());
        for (const auto& e : g.events()) out.emplace_back(e.u, e.v, e.iteration);
        return out;
      },
      py::arg("model"), py::arg("seed_nodes") = 3000, py::arg("slices") = 10,
      py::arg("slice_nodes") = 1000, py::arg("rng_seed") = 0,
      "(src, dst, iteration) edge events of a grown network");

  m.def(
      "optimize",
      [](const std::string& statistic, const std::string& direction, std::size_t runs,
         std::size_t seed_nodes, std::size_t slices, std::size_t slice_nodes,
         std::uint64_t rng_seed, const std::vector<std::string>& models, std::size_t workers) {
        OptimizerConfig c = growth_config(seed_nodes, slices, slice_nodes, rng_seed);
        c.workers = workers;
        if (!models.empty()) {
          c.candidates.clear();
          for (const auto& name : models) c.candidates.push_back(model_from(name));
        }
        const Objective o{statistic_from(statistic), parse_direction(direction)};
        std::vector<OptimizerTrace> traces;
        EnsembleSummary summary;
        {
          py::gil_scoped_release release;
          summary = optimize_ensemble(o, c, runs, &traces);
        }
        nlohmann::json doc;
        doc["summary"] = ensemble_json(summary);
        doc["runs"] = nlohmann::json::array();
        for (const auto& t : traces) doc["runs"].push_back(trace_json(t));
        return to_python(doc);
      },
      py::arg("statistic") = "mobility", py::arg("direction") = "max", py::arg("runs") = 1,
      py::arg("seed_nodes") = 3000, py::arg("slices") = 10, py::arg("slice_nodes") = 1000,
      py::arg("rng_seed") = 0, py::arg("models") = std::vector<std::string>{},
      py::arg("workers") = 1);

  std::vector<std::string> stats, models;
  for (const Statistic s : kAllStatistics) stats.emplace_back(statistic_name(s));
  for (const ModelKind k : kAllModels) models.emplace_back(model_name(k));
  m.attr("STATISTICS") = stats;
  m.attr("MODELS") = models;
}
