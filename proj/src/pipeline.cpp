#include "mobility/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mobility/analysis.hpp"
#include "mobility/csv.hpp"
#include "mobility/errors.hpp"
#include "mobility/io.hpp"
#include "mobility/parallel.hpp"

namespace mobility {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("line " + std::to_string(line) + ": expected a boolean, got '" +
                    std::string(v) + "'");
}

template <typename T>
T parse_unsigned(std::string_view v, std::string_view key, std::size_t line) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("line " + std::to_string(line) + ": " + std::string(key) +
                      " must be a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

std::string_view schedule_name(ScheduleKind k) {
  return k == ScheduleKind::kPaper ? "paper" : "custom";
}
std::string_view group_by_name(GroupBy g) {
  return g == GroupBy::kCollection ? "collection" : "link_creation";
}
std::string_view gini_name(GiniSummary g) {
  return g == GiniSummary::kWindowMean ? "mean" : "full";
}

// Values that would not survive the plain `key = value` form are quoted.
std::string quote_value(std::string_view v) {
  const bool plain = v.find('#') == std::string_view::npos &&
                     v.find('"') == std::string_view::npos && trim(v) == v &&
                     !v.empty();
  if (plain) return std::string(v);
  std::string out = "\"";
  for (const char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// Value text with any trailing comment removed. A double-quoted value is
// unescaped into `quoted` instead.
std::string_view strip_comment(std::string_view line, std::string* quoted,
                               bool* was_quoted, std::size_t line_no) {
  const std::string_view t = trim(line);
  if (!t.empty() && t.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < t.size() && t[i] != '"'; ++i) {
      if (t[i] == '\\' && i + 1 < t.size()) ++i;
      out += t[i];
    }
    if (i >= t.size()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated quote");
    }
    const std::string_view rest = trim(t.substr(i + 1));
    if (!rest.empty() && rest.front() != '#') {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": unexpected text after quoted value");
    }
    *quoted = std::move(out);
    *was_quoted = true;
    return {};
  }
  *was_quoted = false;
  const auto hash = t.find('#');
  return trim(hash == std::string_view::npos ? t : t.substr(0, hash));
}

std::vector<double> degree_vector(const WindowSnapshot& snap, DegreeMode mode) {
  std::vector<double> d(snap.node_count());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = mode == DegreeMode::kBinary
               ? static_cast<double>(snap.distinct_degree(i))
               : static_cast<double>(snap.event_degree(i));
  }
  return d;
}

std::optional<double> snapshot_gini(const WindowSnapshot& snap, DegreeMode mode) {
  if (snap.empty()) return std::nullopt;
  return gini(degree_vector(snap, mode));
}

WindowSchedule build_schedule(const EventStream& s, const RunConfig& cfg) {
  if (cfg.schedule == ScheduleKind::kPaper) return paper_schedule(s, cfg.axis);
  const int decimals = cfg.axis == TimeAxis::kTimestamp ? s.time_decimals() : 0;
  std::vector<WindowTriple> triples;
  for (const auto& w : cfg.windows) triples.push_back(parse_window_triple(w, decimals));
  return custom_schedule(triples, cfg.axis);
}

std::string safe_file_stem(std::string_view name) {
  std::string out;
  for (const char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace

std::string network_id_from_path(std::string_view path) {
  const auto slash = path.find_last_of("/\\");
  std::string_view name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  name = name.substr(0, name.find('.'));
  if (name.empty()) {
    throw ConfigError("cannot derive a network id from '" + std::string(path) + "'");
  }
  return std::string(name);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string quoted;
    bool was_quoted = false;
    const std::string_view bare =
        strip_comment(line.substr(eq + 1), &quoted, &was_quoted, line_no);
    const std::string value = was_quoted ? quoted : std::string(bare);
    auto fail = [&](const std::exception& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    };
    try {
      if (key == "input") {
        cfg.inputs.push_back({network_id_from_path(value), value});
      } else if (key == "format") {
        const FormatSpec cols = FormatSpec::from_columns(value);
        cfg.format.source_column = cols.source_column;
        cfg.format.target_column = cols.target_column;
        cfg.format.time_column = cols.time_column;
      } else if (key == "delimiter") {
        cfg.format.delimiter = parse_delimiter(value);
      } else if (key == "comment") {
        cfg.format.comment_prefix = value;
      } else if (key == "has_header") {
        cfg.format.has_header = parse_bool(value, line_no);
      } else if (key == "axis") {
        cfg.axis = parse_time_axis(value);
      } else if (key == "degree") {
        cfg.degree = parse_degree_mode(value);
      } else if (key == "windows") {
        if (value == "paper") {
          cfg.schedule = ScheduleKind::kPaper;
        } else if (value == "custom") {
          cfg.schedule = ScheduleKind::kCustom;
        } else {
          throw ConfigError("windows must be paper or custom, got '" + value + "'");
        }
      } else if (key == "window") {
        parse_window_triple(value, kMaxTimeDecimals);
        cfg.windows.push_back(value);
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else if (key == "rng_seed") {
        cfg.rng_seed = parse_unsigned<std::uint64_t>(value, key, line_no);
      } else if (key == "groups") {
        cfg.groups_path = value;
      } else if (key == "group_by") {
        if (value == "collection") {
          cfg.group_by = GroupBy::kCollection;
        } else if (value == "link_creation") {
          cfg.group_by = GroupBy::kLinkCreation;
        } else {
          throw ConfigError("group_by must be collection or link_creation");
        }
      } else if (key == "workers") {
        cfg.workers = parse_unsigned<std::size_t>(value, key, line_no);
      } else if (key == "gini") {
        if (value == "mean") {
          cfg.gini = GiniSummary::kWindowMean;
        } else if (value == "full") {
          cfg.gini = GiniSummary::kFullNetwork;
        } else {
          throw ConfigError("gini must be mean or full, got '" + value + "'");
        }
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      if (std::string_view(e.what()).starts_with("line ")) throw;
      fail(e);
    } catch (const InputError& e) {
      fail(e);
    }
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& in : cfg.inputs) out << "input = " << quote_value(in.path) << '\n';
  out << "format = " << cfg.format.columns() << '\n';
  out << "delimiter = " << delimiter_name(cfg.format.delimiter) << '\n';
  out << "comment = " << quote_value(cfg.format.comment_prefix) << '\n';
  out << "has_header = " << (cfg.format.has_header ? "true" : "false") << '\n';
  out << "axis = " << time_axis_name(cfg.axis) << '\n';
  out << "degree = " << degree_mode_name(cfg.degree) << '\n';
  out << "windows = " << schedule_name(cfg.schedule) << '\n';
  for (const auto& w : cfg.windows) out << "window = " << w << '\n';
  if (!cfg.output_dir.empty()) out << "output_dir = " << quote_value(cfg.output_dir) << '\n';
  out << "rng_seed = " << cfg.rng_seed << '\n';
  if (!cfg.groups_path.empty()) out << "groups = " << quote_value(cfg.groups_path) << '\n';
  out << "group_by = " << group_by_name(cfg.group_by) << '\n';
  out << "gini = " << gini_name(cfg.gini) << '\n';
  out << "workers = " << cfg.workers << '\n';
  return out.str();
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : cfg.inputs) inputs.push_back({{"id", in.id}, {"path", in.path}});
  return {{"inputs", inputs},
          {"format", cfg.format.columns()},
          {"delimiter", delimiter_name(cfg.format.delimiter)},
          {"comment", cfg.format.comment_prefix},
          {"has_header", cfg.format.has_header},
          {"axis", time_axis_name(cfg.axis)},
          {"degree", degree_mode_name(cfg.degree)},
          {"windows", schedule_name(cfg.schedule)},
          {"window", cfg.windows},
          {"output_dir", cfg.output_dir},
          {"rng_seed", cfg.rng_seed},
          {"groups", cfg.groups_path},
          {"group_by", group_by_name(cfg.group_by)},
          {"gini", gini_name(cfg.gini)},
          {"workers", cfg.workers}};
}

RunConfig validate_config(RunConfig cfg, const ValidationOptions& opts) {
  if (cfg.inputs.empty()) throw ConfigError("no input networks");
  if (cfg.workers == 0) throw ConfigError("workers must be >= 1");
  if (cfg.schedule == ScheduleKind::kCustom && cfg.windows.empty()) {
    throw ConfigError("windows = custom needs at least one window = q:r:s");
  }
  if (cfg.schedule == ScheduleKind::kPaper && !cfg.windows.empty()) {
    throw ConfigError("window entries require windows = custom");
  }
  std::vector<std::string> ids;
  for (auto& in : cfg.inputs) {
    if (in.id.empty()) in.id = network_id_from_path(in.path);
    ids.push_back(in.id);
  }
  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw ConfigError("duplicate network id '" + *dup + "'");
  }
  if (opts.check_files) {
    for (const auto& in : cfg.inputs) {
      if (!fs::is_regular_file(in.path)) throw InputError("input not found: " + in.path);
    }
    if (!cfg.groups_path.empty() && !fs::is_regular_file(cfg.groups_path)) {
      throw InputError("group metadata not found: " + cfg.groups_path);
    }
  }
  if (opts.probe_inputs) {
    for (const auto& in : cfg.inputs) {
      try {
        const EventStream s = read_edge_list(in.path, cfg.format);
        build_schedule(s, cfg);
      } catch (const Error& e) {
        throw InputError(in.id + ": " + e.what());
      }
    }
  }
  return cfg;
}

std::map<std::string, NetworkGroups> read_group_metadata(const std::string& path) {
  const auto rows = csv::parse(read_file(path));
  if (rows.empty()) throw InputError("group metadata is empty: " + path);
  const auto& header = rows.front();
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InputError("group metadata lacks column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t net = column("network");
  const std::size_t col = column("collection");
  const std::size_t link = column("link_creation");
  std::map<std::string, NetworkGroups> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != header.size()) {
      throw ParseError(i + 1, "expected " + std::to_string(header.size()) + " fields");
    }
    if (!out.emplace(r[net], NetworkGroups{r[col], r[link]}).second) {
      throw ParseError(i + 1, "duplicate network '" + r[net] + "'");
    }
  }
  return out;
}

GiniReport gini_report(const EventStream& s, const WindowSchedule& schedule,
                       DegreeMode mode) {
  GiniReport report;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : schedule.pairs) {
    const Window w{p.q(), p.s()};
    const auto g = snapshot_gini(snapshot(s, w, schedule.axis), mode);
    report.windows.push_back(w);
    report.values.push_back(g);
    if (g) {
      sum += *g;
      ++count;
    }
  }
  if (count > 0) report.window_mean = sum / static_cast<double>(count);
  report.full_network =
      snapshot_gini(snapshot(s, axis_extent(s, schedule.axis), schedule.axis), mode);
  return report;
}

NetworkResult process_network(const NetworkInput& input, const RunConfig& cfg) {
  NetworkResult result;
  result.id = input.id.empty() ? network_id_from_path(input.path) : input.id;
  try {
    const EventStream s = read_edge_list(input.path, cfg.format);
    result.stats = stream_stats(s);
    const WindowSchedule schedule = build_schedule(s, cfg);
    result.records = run_schedule(s, schedule, cfg.degree, 1);
    const GiniReport g = gini_report(s, schedule, cfg.degree);
    result.window_gini = g.values;
    result.gini_summary =
        cfg.gini == GiniSummary::kWindowMean ? g.window_mean : g.full_network;
  } catch (const Error& e) {
    result.records.clear();
    result.window_gini.clear();
    result.error = e.what();
  }
  return result;
}

std::vector<GroupCell> aggregate_groups(const std::vector<NetworkResult>& networks) {
  std::map<std::string, std::vector<const NetworkResult*>> by_group;
  for (const auto& n : networks) {
    if (!n.error) by_group[n.group].push_back(&n);
  }
  std::vector<GroupCell> cells;
  for (const auto& [group, members] : by_group) {
    std::size_t pairs = 0;
    for (const auto* m : members) pairs = std::max(pairs, m->records.size());
    for (std::size_t p = 0; p < pairs; ++p) {
      for (const Statistic s : kAllStatistics) {
        std::vector<double> values;
        for (const auto* m : members) {
          if (p < m->records.size()) {
            if (const auto& v = m->records[p][s]) values.push_back(*v);
          }
        }
        GroupCell cell;
        cell.group = group;
        cell.pair_index = p;
        cell.statistic = s;
        cell.count = values.size();
        if (!values.empty()) {
          const auto n = static_cast<double>(values.size());
          double sum = 0.0;
          for (const double v : values) sum += v;
          const double mean = sum / n;
          cell.mean = mean;
          if (values.size() >= 2) {
            double ss = 0.0;
            for (const double v : values) ss += (v - mean) * (v - mean);
            cell.sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
          }
        }
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

CorpusResult run_corpus(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw ConfigError("no input networks");
  std::map<std::string, NetworkGroups> groups;
  if (!cfg.groups_path.empty()) groups = read_group_metadata(cfg.groups_path);
  CorpusResult result;
  result.networks.resize(cfg.inputs.size());
  parallel_for(cfg.inputs.size(), cfg.workers, [&](std::size_t i) {
    result.networks[i] = process_network(cfg.inputs[i], cfg);
  });
  for (auto& n : result.networks) {
    const auto it = groups.find(n.id);
    if (it == groups.end()) {
      n.group = "ungrouped";
    } else {
      n.group = cfg.group_by == GroupBy::kCollection ? it->second.collection
                                                     : it->second.link_creation;
    }
  }
  result.aggregates = aggregate_groups(result.networks);
  return result;
}

std::string write_corpus_outputs(const CorpusResult& result, const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir.empty() ? fs::path(".") : fs::path(cfg.output_dir);
  fs::create_directories(dir);
  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write " + p.string());
    return f;
  };

  nlohmann::json files = nlohmann::json::array();
  nlohmann::json networks = nlohmann::json::array();
  for (const auto& n : result.networks) {
    nlohmann::json entry = {{"id", n.id}, {"group", n.group}};
    if (n.error) {
      entry["status"] = "failed";
      entry["error"] = *n.error;
      networks.push_back(entry);
      continue;
    }
    const std::string name = safe_file_stem(n.id) + ".taxonomy.csv";
    {
      auto f = open(dir / name);
      write_taxonomy_csv(f, n.records,
                         cfg.axis == TimeAxis::kTimestamp ? n.stats.time_decimals : 0);
    }
    nlohmann::json gini_values = nlohmann::json::array();
    for (const auto& g : n.window_gini) {
      gini_values.push_back(g ? nlohmann::json(*g) : nlohmann::json(nullptr));
    }
    entry["status"] = "ok";
    entry["stats"] = {{"nodes", n.stats.nodes},
                      {"events", n.stats.events},
                      {"iterations", n.stats.iterations},
                      {"t_min", format_timestamp(n.stats.t_min, n.stats.time_decimals)},
                      {"t_max", format_timestamp(n.stats.t_max, n.stats.time_decimals)},
                      {"self_loops_dropped", n.stats.self_loops_dropped}};
    entry["window_gini"] = gini_values;
    entry["gini_summary"] =
        n.gini_summary ? nlohmann::json(*n.gini_summary) : nlohmann::json(nullptr);
    networks.push_back(entry);
    files.push_back({{"path", name}, {"kind", "taxonomy"}, {"network", n.id},
                     {"rows", n.records.size()}});
  }

  std::map<std::string, std::vector<const GroupCell*>> by_group;
  for (const auto& c : result.aggregates) by_group[c.group].push_back(&c);
  for (const auto& [group, cells] : by_group) {
    const std::string name = safe_file_stem(group) + ".aggregate.csv";
    auto f = open(dir / name);
    csv::write_row(f, {"group", "pair_index", "statistic", "mean", "sem", "count"});
    for (const auto* c : cells) {
      csv::write_row(f, {c->group, std::to_string(c->pair_index),
                         std::string(statistic_name(c->statistic)),
                         c->mean ? format_double(*c->mean) : "",
                         c->mean ? format_double(c->sem) : "",
                         std::to_string(c->count)});
    }
    files.push_back({{"path", name}, {"kind", "aggregate"}, {"group", group},
                     {"rows", cells.size()}});
  }

  const nlohmann::json manifest = {{"tool", "mobility"},
                                   {"version", kVersion},
                                   {"command", "corpus"},
                                   {"config", config_json(cfg)},
                                   {"networks", networks},
                                   {"files", files}};
  const fs::path path = dir / "manifest.json";
  auto f = open(path);
  f << manifest.dump(2) << '\n';
  return path.string();
}

}  // namespace mobility
