#include "mobility/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "mobility/analysis.hpp"
#include "mobility/csv.hpp"
#include "mobility/errors.hpp"
#include "mobility/event_stream.hpp"
#include "mobility/growth_models.hpp"
#include "mobility/io.hpp"
#include "mobility/optimizer.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/taxonomy.hpp"
#include "mobility/windowing.hpp"

namespace mobility::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::size_t env_workers(std::size_t fallback) {
  const auto v = env("MOBILITY_WORKERS");
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long n = std::stoul(*v, &pos);
    if (pos != v->size() || n == 0) throw std::invalid_argument(*v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("MOBILITY_WORKERS must be a positive integer, got '" + *v + "'");
  }
}

std::string default_out_dir(const std::string& fallback) {
  return env("MOBILITY_OUT_DIR").value_or(fallback);
}

json header(std::string_view command) {
  return {{"tool", "mobility"}, {"version", kVersion}, {"command", command}};
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write " + p.string());
  return f;
}

void write_manifest(const fs::path& dir, const json& manifest) {
  auto f = open_out(dir / "manifest.json");
  f << manifest.dump(2) << '\n';
}

// Options shared by the subcommands that read an edge list.
struct StreamOptions {
  std::string input;
  std::string format = "src,dst,time";
  std::string delimiter = "auto";
  std::string comment = "#";
  bool has_header = false;
  std::string axis = "events";
  std::string degree = "binary";
  std::string windows = "paper";
  std::vector<std::string> window;

  void add(CLI::App* app) {
    app->add_option("--input,-i", input, "Edge list (plain or gzip)")->required();
    app->add_option("--format", format, "Column layout, e.g. src,dst,time")
        ->capture_default_str();
    app->add_option("--delimiter", delimiter,
                    "auto, whitespace, comma or tab (auto: comma for .csv, "
                    "tab for .tsv, whitespace otherwise)")
        ->capture_default_str();
    app->add_option("--comment", comment, "Comment prefix (empty disables)")
        ->capture_default_str();
    app->add_flag("--has-header", has_header, "Skip the first data line");
    app->add_option("--axis", axis, "Window axis: events or time")->capture_default_str();
    app->add_option("--degree", degree, "Degree mode: binary or multiplicity")
        ->capture_default_str();
    app->add_option("--windows", windows, "Schedule: paper or custom")->capture_default_str();
    app->add_option("--window", window, "Custom window pair q:r:s (repeatable)");
  }

  RunConfig config() const {
    RunConfig cfg;
    cfg.inputs.push_back({network_id_from_path(input), input});
    cfg.format = FormatSpec::from_columns(format);
    std::string d = delimiter;
    if (d == "auto") {
      const std::string name = fs::path(input).filename().string();
      if (name.find(".csv") != std::string::npos) {
        d = "comma";
      } else if (name.find(".tsv") != std::string::npos) {
        d = "tab";
      } else {
        d = "whitespace";
      }
    }
    cfg.format.delimiter = parse_delimiter(d);
    cfg.format.comment_prefix = comment;
    cfg.format.has_header = has_header;
    cfg.axis = parse_time_axis(axis);
    cfg.degree = parse_degree_mode(degree);
    if (windows == "paper") {
      cfg.schedule = ScheduleKind::kPaper;
    } else if (windows == "custom") {
      cfg.schedule = ScheduleKind::kCustom;
    } else {
      throw ConfigError("--windows must be paper or custom");
    }
    cfg.windows = window;
    return validate_config(cfg);
  }
};

WindowSchedule schedule_for(const EventStream& s, const RunConfig& cfg) {
  if (cfg.schedule == ScheduleKind::kPaper) return paper_schedule(s, cfg.axis);
  const int decimals = cfg.axis == TimeAxis::kTimestamp ? s.time_decimals() : 0;
  std::vector<WindowTriple> triples;
  for (const auto& w : cfg.windows) triples.push_back(parse_window_triple(w, decimals));
  return custom_schedule(triples, cfg.axis);
}

int axis_decimals(const EventStream& s, const RunConfig& cfg) {
  return cfg.axis == TimeAxis::kTimestamp ? s.time_decimals() : 0;
}

json stats_json(const StreamStats& st) {
  return {{"nodes", st.nodes},
          {"events", st.events},
          {"iterations", st.iterations},
          {"t_min", format_timestamp(st.t_min, st.time_decimals)},
          {"t_max", format_timestamp(st.t_max, st.time_decimals)},
          {"self_loops_dropped", st.self_loops_dropped}};
}

struct GrowthOptions {
  std::size_t seed_nodes = 3000;
  std::size_t slices = 10;
  std::size_t slice_nodes = 1000;
  std::uint64_t rng_seed = 0;
  double gamma_shape = 2.0;
  double gamma_scale = 1.0;
  std::size_t resample_interval = 100;
  std::string resample_target = "uniform";

  void add(CLI::App* app) {
    app->add_option("--seed-nodes", seed_nodes, "Nodes in the preferential-attachment seed")
        ->capture_default_str();
    app->add_option("--slices", slices, "Number of growth slices")->capture_default_str();
    app->add_option("--slice-nodes", slice_nodes, "Nodes added per slice")
        ->capture_default_str();
    app->add_option("--rng-seed", rng_seed, "Random seed")->capture_default_str();
    app->add_option("--gamma-shape", gamma_shape, "Fitness Gamma shape")
        ->capture_default_str();
    app->add_option("--gamma-scale", gamma_scale, "Fitness Gamma scale")
        ->capture_default_str();
    app->add_option("--resample-interval", resample_interval,
                    "Iterations between fitness re-draws (gamma models)")
        ->capture_default_str();
    app->add_option("--resample-target", resample_target,
                    "Node re-drawn by gamma_individual: uniform or lowest")
        ->capture_default_str();
  }

  ModelParams params() const {
    if (!(gamma_shape > 0.0) || !(gamma_scale > 0.0)) {
      throw ConfigError("gamma shape and scale must be positive");
    }
    if (resample_interval == 0) throw ConfigError("--resample-interval must be >= 1");
    ModelParams p;
    p.gamma_shape = gamma_shape;
    p.gamma_scale = gamma_scale;
    p.resample_interval = resample_interval;
    if (resample_target == "uniform") {
      p.individual_target = ResampleTarget::kUniform;
    } else if (resample_target == "lowest") {
      p.individual_target = ResampleTarget::kLowestFitness;
    } else {
      throw ConfigError("--resample-target must be uniform or lowest");
    }
    return p;
  }

  json to_json() const {
    return {{"seed_nodes", seed_nodes},       {"slices", slices},
            {"slice_nodes", slice_nodes},     {"rng_seed", rng_seed},
            {"gamma_shape", gamma_shape},     {"gamma_scale", gamma_scale},
            {"resample_interval", resample_interval},
            {"resample_target", resample_target}};
  }
};

ModelKind model_from(std::string_view name) {
  const auto m = find_model(name);
  if (!m) throw ConfigError("unknown model '" + std::string(name) + "'");
  return *m;
}

Statistic statistic_from(std::string_view name) {
  const auto s = find_statistic(name);
  if (!s) throw ConfigError("unknown statistic '" + std::string(name) + "'");
  return *s;
}

GrowthState generate_trace(ModelKind kind, const GrowthOptions& g) {
  OptimizerConfig cfg;
  cfg.seed_nodes = g.seed_nodes;
  cfg.slices = g.slices;
  cfg.slice_nodes = g.slice_nodes;
  cfg.rng_seed = g.rng_seed;
  cfg.params = g.params();
  return generate_network(kind, cfg);
}

class Driver {
 public:
  Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void taxonomy();
  void generate();
  void optimize();
  void gini_cmd();
  void pca();
  void corpus();

  std::ostream& out_;
  std::ostream& err_;
  bool json_ = false;
  std::size_t workers_ = 1;
  bool workers_given_ = false;

  StreamOptions stream_;
  std::string out_path_;
  std::string out_dir_;

  std::string model_;
  GrowthOptions growth_;

  std::string statistic_ = "mobility";
  std::string direction_ = "max";
  std::size_t runs_ = 10;
  std::vector<std::string> models_;
  std::string opt_degree_ = "multiplicity";

  std::string gini_summary_ = "mean";

  std::vector<std::string> taxonomy_files_;
  std::string groups_;
  std::string group_by_ = "collection";
  double n_sigma_ = 2.0;
  std::size_t components_ = 1;
  std::uint64_t pca_seed_ = 0;

  std::string config_path_;
};

int Driver::run(const std::vector<std::string>& args) {
  CLI::App app{"Mobility taxonomy of temporal networks and growth-model "
               "experiments",
               "mobility"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", json_, "Report on stdout as one JSON document");
    sub->add_option("--workers", workers_,
                    "Worker threads (env MOBILITY_WORKERS)")
        ->check(CLI::PositiveNumber);
  };

  auto* tax = app.add_subcommand("taxonomy", "Six window-pair correlations of an edge list");
  stream_.add(tax);
  tax->add_option("--out,-o", out_path_, "Write the CSV here instead of stdout");
  add_common(tax);

  auto* gen = app.add_subcommand("generate", "Grow a network with one attachment rule");
  gen->add_option("--model", model_, "Attachment rule")->required();
  growth_.add(gen);
  gen->add_option("--out,-o", out_path_, "Write the trace here instead of stdout");
  add_common(gen);

  auto* opt = app.add_subcommand("optimize", "Greedy model selection ensemble");
  opt->add_option("--statistic", statistic_, "Objective statistic")->capture_default_str();
  opt->add_option("--direction", direction_, "max or min")->capture_default_str();
  opt->add_option("--runs", runs_, "Runs in the ensemble")->capture_default_str();
  opt->add_option("--models", models_, "Candidate models (default: all)")->delimiter(',');
  opt->add_option("--degree", opt_degree_, "Degree mode: binary or multiplicity")
      ->capture_default_str();
  growth_.add(opt);
  opt->add_option("--out-dir", out_dir_, "Output directory (env MOBILITY_OUT_DIR)");
  add_common(opt);

  auto* gin = app.add_subcommand("gini", "Degree Gini coefficient per window pair span");
  stream_.add(gin);
  gin->add_option("--summary", gini_summary_, "Headline value: mean or full")
      ->capture_default_str();
  gin->add_option("--out,-o", out_path_, "Write the CSV here instead of stdout");
  add_common(gin);

  auto* pc = app.add_subcommand("pca", "PCA of taxonomy records with group ellipses");
  pc->add_option("--taxonomy", taxonomy_files_, "Taxonomy CSV per network (repeatable)")
      ->required();
  pc->add_option("--groups", groups_, "Metadata CSV: network,collection,link_creation");
  pc->add_option("--group-by", group_by_, "collection or link_creation")
      ->capture_default_str();
  pc->add_option("--n-sigma", n_sigma_, "Ellipse contour in standard deviations")
      ->capture_default_str();
  pc->add_option("--components", components_, "Mixture components per group")
      ->capture_default_str();
  pc->add_option("--rng-seed", pca_seed_, "Seed for mixture initialisation")
      ->capture_default_str();
  pc->add_option("--out-dir", out_dir_, "Output directory (env MOBILITY_OUT_DIR)");
  add_common(pc);

  auto* cor = app.add_subcommand("corpus", "Batch taxonomy run from a config file");
  cor->add_option("--config,-c", config_path_, "Run configuration")->required();
  cor->add_option("--out-dir", out_dir_, "Override output_dir (env MOBILITY_OUT_DIR)");
  add_common(cor);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? kSuccess : kUsageError;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    workers_given_ = workers_given_ || sub->count("--workers") > 0;
  }
  try {
    if (!workers_given_) workers_ = env_workers(1);
    if (tax->parsed()) taxonomy();
    if (gen->parsed()) generate();
    if (opt->parsed()) optimize();
    if (gin->parsed()) gini_cmd();
    if (pc->parsed()) pca();
    if (cor->parsed()) corpus();
  } catch (const ConfigError& e) {
    err_ << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    err_ << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err_ << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kSuccess;
}

void Driver::taxonomy() {
  RunConfig cfg = stream_.config();
  cfg.workers = workers_;
  const EventStream s = read_edge_list(cfg.inputs[0].path, cfg.format);
  const WindowSchedule schedule = schedule_for(s, cfg);
  const auto records = run_schedule(s, schedule, cfg.degree, workers_);
  const int decimals = axis_decimals(s, cfg);

  if (!out_path_.empty()) {
    auto f = open_out(out_path_);
    write_taxonomy_csv(f, records, decimals);
  }
  if (json_) {
    json doc = header("taxonomy");
    doc["config"] = config_json(cfg);
    doc["stats"] = stats_json(stream_stats(s));
    doc["records"] = taxonomy_json(records, decimals);
    if (!out_path_.empty()) doc["output"] = out_path_;
    out_ << doc.dump(2) << '\n';
  } else if (out_path_.empty()) {
    write_taxonomy_csv(out_, records, decimals);
  }
}

void Driver::generate() {
  const ModelKind kind = model_from(model_);
  const GrowthState state = generate_trace(kind, growth_);
  if (!out_path_.empty()) {
    auto f = open_out(out_path_);
    write_growth_trace(f, state.events());
  }
  if (json_) {
    json doc = header("generate");
    doc["config"] = growth_.to_json();
    doc["config"]["model"] = model_name(kind);
    doc["nodes"] = state.node_count();
    doc["edges"] = state.edge_count();
    if (out_path_.empty()) {
      json events = json::array();
      for (const auto& e : state.events()) events.push_back({e.u, e.v, e.iteration});
      doc["events"] = events;
    } else {
      doc["output"] = out_path_;
    }
    out_ << doc.dump(2) << '\n';
  } else if (out_path_.empty()) {
    write_growth_trace(out_, state.events());
  }
}

void Driver::optimize() {
  const Objective objective{statistic_from(statistic_), parse_direction(direction_)};
  OptimizerConfig cfg;
  cfg.seed_nodes = growth_.seed_nodes;
  cfg.slices = growth_.slices;
  cfg.slice_nodes = growth_.slice_nodes;
  cfg.rng_seed = growth_.rng_seed;
  cfg.params = growth_.params();
  cfg.workers = workers_;
  cfg.degree_mode = parse_degree_mode(opt_degree_);
  if (!models_.empty()) {
    cfg.candidates.clear();
    for (const auto& m : models_) cfg.candidates.push_back(model_from(m));
  }
  if (runs_ == 0) throw ConfigError("--runs must be >= 1");

  const fs::path dir = out_dir_.empty() ? default_out_dir(".") : out_dir_;
  std::vector<OptimizerTrace> traces;
  const EnsembleSummary summary = optimize_ensemble(objective, cfg, runs_, &traces);

  fs::create_directories(dir);
  json files = json::array();
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const std::string name = "run_" + std::to_string(k) + ".trace.csv";
    auto f = open_out(dir / name);
    write_optimizer_trace(f, traces[k]);
    files.push_back({{"path", name}, {"kind", "trace"}, {"run", k},
                     {"rng_seed", traces[k].rng_seed}});
  }
  {
    auto f = open_out(dir / "summary.csv");
    write_ensemble_summary(f, summary);
    files.push_back({{"path", "summary.csv"}, {"kind", "summary"}});
  }
  json config = growth_.to_json();
  config["statistic"] = statistic_name(objective.statistic);
  config["direction"] = direction_name(objective.direction);
  config["runs"] = runs_;
  config["degree"] = degree_mode_name(cfg.degree_mode);
  config["workers"] = workers_;
  json models = json::array();
  for (const ModelKind m : cfg.candidates) models.push_back(model_name(m));
  config["models"] = models;
  json manifest = header("optimize");
  manifest["config"] = config;
  manifest["files"] = files;
  write_manifest(dir, manifest);

  if (json_) {
    json doc = header("optimize");
    doc["config"] = config;
    doc["output_dir"] = dir.string();
    doc["summary"] = ensemble_json(summary);
    json runs = json::array();
    for (const auto& t : traces) runs.push_back(trace_json(t));
    doc["runs"] = runs;
    out_ << doc.dump(2) << '\n';
  } else {
    write_ensemble_summary(out_, summary);
  }
}

void Driver::gini_cmd() {
  RunConfig cfg = stream_.config();
  if (gini_summary_ == "mean") {
    cfg.gini = GiniSummary::kWindowMean;
  } else if (gini_summary_ == "full") {
    cfg.gini = GiniSummary::kFullNetwork;
  } else {
    throw ConfigError("--summary must be mean or full");
  }
  const EventStream s = read_edge_list(cfg.inputs[0].path, cfg.format);
  const WindowSchedule schedule = schedule_for(s, cfg);
  const GiniReport report = gini_report(s, schedule, cfg.degree);
  const int decimals = axis_decimals(s, cfg);
  const std::optional<double> headline =
      cfg.gini == GiniSummary::kWindowMean ? report.window_mean : report.full_network;

  auto write_csv = [&](std::ostream& o) {
    csv::write_row(o, {"window", "lo", "hi", "gini"});
    for (std::size_t i = 0; i < report.windows.size(); ++i) {
      csv::write_row(o, {std::to_string(i), report.windows[i].lo.to_string(decimals),
                         report.windows[i].hi.to_string(decimals),
                         report.values[i] ? format_double(*report.values[i]) : ""});
    }
    csv::write_row(o, {"mean", "", "",
                       report.window_mean ? format_double(*report.window_mean) : ""});
    csv::write_row(o, {"full", "", "",
                       report.full_network ? format_double(*report.full_network) : ""});
  };
  if (!out_path_.empty()) {
    auto f = open_out(out_path_);
    write_csv(f);
  }
  if (json_) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json windows = json::array();
    for (std::size_t i = 0; i < report.windows.size(); ++i) {
      windows.push_back({{"window", i},
                         {"lo", report.windows[i].lo.to_string(decimals)},
                         {"hi", report.windows[i].hi.to_string(decimals)},
                         {"gini", opt(report.values[i])}});
    }
    json doc = header("gini");
    doc["config"] = config_json(cfg);
    doc["windows"] = windows;
    doc["window_mean"] = opt(report.window_mean);
    doc["full_network"] = opt(report.full_network);
    doc["summary"] = opt(headline);
    out_ << doc.dump(2) << '\n';
  } else if (out_path_.empty()) {
    write_csv(out_);
  }
}

void Driver::pca() {
  if (!(n_sigma_ > 0.0)) throw ConfigError("--n-sigma must be positive");
  if (components_ == 0) throw ConfigError("--components must be >= 1");
  if (group_by_ != "collection" && group_by_ != "link_creation") {
    throw ConfigError("--group-by must be collection or link_creation");
  }
  std::map<std::string, NetworkGroups> meta;
  if (!groups_.empty()) meta = read_group_metadata(groups_);

  struct Loaded {
    std::string id;
    std::string group;
    std::vector<TaxonomyCsvRow> rows;
  };
  std::vector<Loaded> nets;
  std::vector<TaxonomyRow> first_rows;
  for (const auto& path : taxonomy_files_) {
    Loaded n;
    n.id = network_id_from_path(path);
    try {
      n.rows = parse_taxonomy_csv(read_file(path));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), path + ": " + e.what());
    }
    const auto it = meta.find(n.id);
    n.group = it == meta.end()
                  ? "ungrouped"
                  : (group_by_ == "collection" ? it->second.collection
                                               : it->second.link_creation);
    for (const auto& r : n.rows) {
      if (r.pair_index == 0) first_rows.push_back(r.values);
    }
    nets.push_back(std::move(n));
  }
  const PcaModel model = pca_fit(first_rows);

  struct Point {
    std::string network;
    std::string group;
    std::size_t pair_index;
    Point2 xy;
  };
  std::vector<Point> points;
  std::size_t skipped = 0;
  std::map<std::string, std::vector<Point2>> by_group;
  for (const auto& n : nets) {
    for (const auto& r : n.rows) {
      const auto p = pca_project(model, r.values);
      if (!p) {
        ++skipped;
        continue;
      }
      points.push_back({n.id, n.group, r.pair_index, *p});
      by_group[n.group].push_back(*p);
    }
  }
  std::vector<GroupEllipse> ellipses;
  std::vector<std::string> unfitted;
  for (const auto& [group, pts] : by_group) {
    if (pts.size() < 3 * components_) {
      unfitted.push_back(group);
      continue;
    }
    for (auto& e : fit_gaussian_mixture(pts, components_, n_sigma_, pca_seed_, group)) {
      ellipses.push_back(std::move(e));
    }
  }
  for (const auto& g : unfitted) {
    err_ << "warning: group '" << g << "' has too few points for an ellipse\n";
  }

  double total = 0.0;
  for (const double v : model.eigenvalues) total += v;
  auto components_csv = [&](std::ostream& o) {
    std::vector<std::string> h{"component", "eigenvalue", "explained_variance"};
    for (const Statistic s : kAllStatistics) h.emplace_back(statistic_name(s));
    csv::write_row(o, h);
    for (std::size_t c = 0; c < kStatisticCount; ++c) {
      std::vector<std::string> row{std::to_string(c + 1), format_double(model.eigenvalues[c]),
                                   format_double(total > 0 ? model.eigenvalues[c] / total : 0)};
      for (const double v : model.components[c]) row.push_back(format_double(v));
      csv::write_row(o, row);
    }
  };
  auto points_csv = [&](std::ostream& o) {
    csv::write_row(o, {"network", "group", "pair_index", "pc1", "pc2"});
    for (const auto& p : points) {
      csv::write_row(o, {p.network, p.group, std::to_string(p.pair_index),
                         format_double(p.xy[0]), format_double(p.xy[1])});
    }
  };
  auto ellipses_csv = [&](std::ostream& o) {
    csv::write_row(o, {"group", "weight", "mean_x", "mean_y", "cov_xx", "cov_xy", "cov_yy",
                       "major_axis", "minor_axis", "angle", "n_sigma", "degenerate"});
    for (const auto& e : ellipses) {
      csv::write_row(o, {e.label, format_double(e.weight), format_double(e.mean[0]),
                         format_double(e.mean[1]), format_double(e.covariance[0][0]),
                         format_double(e.covariance[0][1]), format_double(e.covariance[1][1]),
                         format_double(e.major_axis), format_double(e.minor_axis),
                         format_double(e.angle), format_double(e.n_sigma),
                         e.degenerate ? "1" : "0"});
    }
  };

  json config = {{"taxonomy", taxonomy_files_}, {"groups", groups_},
                 {"group_by", group_by_},       {"n_sigma", n_sigma_},
                 {"components", components_},   {"rng_seed", pca_seed_}};
  const std::string dir_str = out_dir_.empty() ? default_out_dir("") : out_dir_;
  if (!dir_str.empty()) {
    const fs::path dir = dir_str;
    fs::create_directories(dir);
    { auto f = open_out(dir / "components.csv"); components_csv(f); }
    { auto f = open_out(dir / "points.csv"); points_csv(f); }
    { auto f = open_out(dir / "ellipses.csv"); ellipses_csv(f); }
    json manifest = header("pca");
    manifest["config"] = config;
    manifest["rows_used"] = model.rows_used;
    manifest["rows_excluded"] = model.rows_excluded;
    manifest["files"] = json::array({{{"path", "components.csv"}, {"kind", "components"}},
                                     {{"path", "points.csv"}, {"kind", "points"}},
                                     {{"path", "ellipses.csv"}, {"kind", "ellipses"}}});
    write_manifest(dir, manifest);
  }

  if (json_) {
    json comps = json::array();
    for (std::size_t c = 0; c < kStatisticCount; ++c) {
      json loadings = json::object();
      for (const Statistic s : kAllStatistics) {
        loadings[std::string(statistic_name(s))] =
            model.components[c][static_cast<std::size_t>(s)];
      }
      comps.push_back({{"component", c + 1},
                       {"eigenvalue", model.eigenvalues[c]},
                       {"explained_variance", total > 0 ? model.eigenvalues[c] / total : 0.0},
                       {"loadings", loadings}});
    }
    json pts = json::array();
    for (const auto& p : points) {
      pts.push_back({{"network", p.network}, {"group", p.group},
                     {"pair_index", p.pair_index}, {"pc1", p.xy[0]}, {"pc2", p.xy[1]}});
    }
    json ells = json::array();
    for (const auto& e : ellipses) {
      ells.push_back({{"group", e.label}, {"weight", e.weight},
                      {"mean", {e.mean[0], e.mean[1]}},
                      {"covariance", {{e.covariance[0][0], e.covariance[0][1]},
                                      {e.covariance[1][0], e.covariance[1][1]}}},
                      {"major_axis", e.major_axis}, {"minor_axis", e.minor_axis},
                      {"angle", e.angle}, {"n_sigma", e.n_sigma},
                      {"degenerate", e.degenerate}});
    }
    json doc = header("pca");
    doc["config"] = config;
    doc["mean"] = model.mean;
    doc["rows_used"] = model.rows_used;
    doc["rows_excluded"] = model.rows_excluded;
    doc["points_skipped"] = skipped;
    doc["components"] = comps;
    doc["points"] = pts;
    doc["ellipses"] = ells;
    out_ << doc.dump(2) << '\n';
  } else {
    components_csv(out_);
  }
}

void Driver::corpus() {
  RunConfig cfg = parse_config(read_file(config_path_));
  if (!out_dir_.empty()) {
    cfg.output_dir = out_dir_;
  } else if (const auto e = env("MOBILITY_OUT_DIR")) {
    cfg.output_dir = *e;
  }
  if (workers_given_ || env("MOBILITY_WORKERS")) cfg.workers = workers_;
  cfg = validate_config(cfg);
  const CorpusResult result = run_corpus(cfg);
  const std::string manifest = write_corpus_outputs(result, cfg);

  std::size_t failed = 0;
  for (const auto& n : result.networks) failed += n.error ? 1 : 0;
  if (json_) {
    json doc = header("corpus");
    doc["config"] = config_json(cfg);
    doc["manifest"] = manifest;
    json nets = json::array();
    for (const auto& n : result.networks) {
      json e = {{"id", n.id}, {"group", n.group}, {"status", n.error ? "failed" : "ok"}};
      if (n.error) e["error"] = *n.error;
      nets.push_back(e);
    }
    doc["networks"] = nets;
    out_ << doc.dump(2) << '\n';
  } else {
    for (const auto& n : result.networks) {
      out_ << n.id << '\t' << n.group << '\t'
           << (n.error ? "failed: " + *n.error : "ok") << '\n';
    }
    out_ << "manifest\t" << manifest << '\n';
  }
  if (failed == result.networks.size()) {
    throw InputError("every network failed");
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Driver driver(out, err);
  return driver.run(args);
}

}  // namespace mobility::cli
