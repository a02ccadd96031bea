#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobility/event_stream.hpp"
#include "mobility/taxonomy.hpp"
#include "mobility/windowing.hpp"

namespace mobility {

enum class ScheduleKind { kPaper, kCustom };
// Which degree vector the headline Gini value comes from.
enum class GiniSummary { kWindowMean, kFullNetwork };
enum class GroupBy { kCollection, kLinkCreation };

struct NetworkInput {
  std::string id;
  std::string path;
  friend bool operator==(const NetworkInput&, const NetworkInput&) = default;
};

// Network id derived from a path: the file name up to its first '.'.
std::string network_id_from_path(std::string_view path);

struct RunConfig {
  std::vector<NetworkInput> inputs;
  FormatSpec format;
  TimeAxis axis = TimeAxis::kEventIteration;
  DegreeMode degree = DegreeMode::kBinary;
  ScheduleKind schedule = ScheduleKind::kPaper;
  std::vector<std::string> windows;  // "q:r:s" triples for kCustom
  std::string output_dir;
  std::uint64_t rng_seed = 0;
  std::string groups_path;
  GroupBy group_by = GroupBy::kCollection;
  GiniSummary gini = GiniSummary::kWindowMean;
  std::size_t workers = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Flat `key = value` text, one entry per line, '#' starts a comment. Repeated
// keys (`input`, `window`) accumulate. Throws ConfigError naming the line.
RunConfig parse_config(std::string_view text);
std::string serialize_config(const RunConfig& cfg);
nlohmann::json config_json(const RunConfig& cfg);

struct ValidationOptions {
  bool check_files = true;
  // Parse every input and build its schedule, rejecting streams the schedule
  // cannot cover.
  bool probe_inputs = false;
};

// Returns the normalised config (ids filled, paths checked). Throws
// ConfigError on contradictions and InputError on missing files.
RunConfig validate_config(RunConfig cfg, const ValidationOptions& opts = {});

// Group labels from a metadata CSV with columns network,collection,
// link_creation (header required).
struct NetworkGroups {
  std::string collection;
  std::string link_creation;
};
std::map<std::string, NetworkGroups> read_group_metadata(
    const std::string& path);

struct NetworkResult {
  std::string id;
  std::string group;
  StreamStats stats;
  std::vector<TaxonomyRecord> records;
  // Gini of the degree vector over each pair's full span [q, s).
  std::vector<std::optional<double>> window_gini;
  std::optional<double> gini_summary;
  std::optional<std::string> error;
};

struct GroupCell {
  std::string group;
  std::size_t pair_index = 0;
  Statistic statistic = Statistic::kMobility;
  std::optional<double> mean;
  double sem = 0.0;  // sample sd / sqrt(count); 0 when count < 2
  std::size_t count = 0;
};

struct CorpusResult {
  std::vector<NetworkResult> networks;
  std::vector<GroupCell> aggregates;
};

// Processes one network end to end (parse, schedule, taxonomy, Gini).
NetworkResult process_network(const NetworkInput& input, const RunConfig& cfg);

// Per group, pair index and statistic: mean and standard error over finite
// values of the successful networks.
std::vector<GroupCell> aggregate_groups(
    const std::vector<NetworkResult>& networks);

// Runs every network (failures are recorded, not thrown) and aggregates.
CorpusResult run_corpus(const RunConfig& cfg);

// Writes <id>.taxonomy.csv per network, <group>.aggregate.csv per group and
// manifest.json into cfg.output_dir. Returns the manifest path.
std::string write_corpus_outputs(const CorpusResult& result,
                                 const RunConfig& cfg);

// Gini per schedule pair span plus the summary value.
struct GiniReport {
  std::vector<Window> windows;
  std::vector<std::optional<double>> values;
  std::optional<double> window_mean;
  std::optional<double> full_network;
};
GiniReport gini_report(const EventStream& s, const WindowSchedule& schedule,
                       DegreeMode mode);

}  // namespace mobility
