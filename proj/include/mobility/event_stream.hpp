#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mobility {

using NodeId = std::uint32_t;
// Fixed-point timestamp: the raw value multiplied by 10^time_decimals.
using Timestamp = std::int64_t;

// One undirected interaction, stored canonically with u < v.
struct EdgeEvent {
  NodeId u = 0;
  NodeId v = 0;
  Timestamp t = 0;

  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

// Bijective mapping between raw node labels and dense ids 0..N-1.
class NodeLabels {
 public:
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }

  friend bool operator==(const NodeLabels& a, const NodeLabels& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> ids_;
};

// An immutable, time-ordered sequence of edge events. Events that share a
// timestamp share one iteration index; iteration indices start at 0 and
// step by exactly 1 between distinct timestamps.
class EventStream {
 public:
  EventStream() = default;

  // Builds a stream from events whose endpoints index into `labels`. Events
  // are stably sorted by timestamp and node ids are renumbered in order of
  // first appearance in the sorted sequence, so the result does not depend on
  // the input order of events with distinct timestamps. Self-loops must
  // already have been removed.
  static EventStream build(std::vector<EdgeEvent> events,
                           const NodeLabels& labels, int time_decimals = 0,
                           std::size_t self_loops_dropped = 0);

  // Builds a stream from integer-labelled events (labels are decimal ids).
  // Self-loops are dropped and counted.
  static EventStream from_pairs(
      std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs,
      std::span<const Timestamp> times);

  std::span<const EdgeEvent> events() const { return events_; }
  std::span<const std::uint32_t> iterations() const { return iterations_; }
  const NodeLabels& labels() const { return labels_; }

  std::size_t node_count() const { return labels_.size(); }
  std::size_t event_count() const { return events_.size(); }
  std::size_t iteration_count() const {
    return iterations_.empty() ? 0 : iterations_.back() + 1;
  }
  bool empty() const { return events_.empty(); }

  // Number of decimal places folded into each Timestamp.
  int time_decimals() const { return time_decimals_; }
  std::size_t self_loops_dropped() const { return self_loops_dropped_; }

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  std::vector<EdgeEvent> events_;
  std::vector<std::uint32_t> iterations_;
  NodeLabels labels_;
  int time_decimals_ = 0;
  std::size_t self_loops_dropped_ = 0;
};

enum class Delimiter { kWhitespace, kComma, kTab };

// Column layout and lexical conventions of an edge-list file.
struct FormatSpec {
  std::size_t source_column = 0;
  std::size_t target_column = 1;
  std::size_t time_column = 2;
  Delimiter delimiter = Delimiter::kWhitespace;
  std::string comment_prefix = "#";
  bool has_header = false;

  // Parses a column list such as "src,dst,time" or "time,src,weight,dst".
  // Names other than src/dst/time mark ignored columns.
  static FormatSpec from_columns(std::string_view columns);
  std::string columns() const;

  friend bool operator==(const FormatSpec&, const FormatSpec&) = default;
};

Delimiter parse_delimiter(std::string_view name);
std::string_view delimiter_name(Delimiter d);

// Maximum number of fractional digits accepted in a timestamp.
inline constexpr int kMaxTimeDecimals = 9;

EventStream parse_edge_list(std::string_view text, const FormatSpec& format);
EventStream parse_edge_list(std::istream& in, const FormatSpec& format);
// Reads a file from disk; gzip-compressed files are detected and inflated.
EventStream read_edge_list(const std::string& path, const FormatSpec& format);

// Reads a whole file, transparently inflating gzip.
std::string read_file(const std::string& path);

struct StreamStats {
  std::size_t nodes = 0;
  std::size_t events = 0;
  std::size_t iterations = 0;
  Timestamp t_min = 0;
  Timestamp t_max = 0;
  int time_decimals = 0;
  std::size_t self_loops_dropped = 0;
};

StreamStats stream_stats(const EventStream& s);

// Renders a fixed-point timestamp in its original unit ("12.5").
std::string format_timestamp(Timestamp t, int decimals);

}  // namespace mobility
