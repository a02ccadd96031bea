#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mobility/event_stream.hpp"
#include "mobility/rational.hpp"

namespace mobility {

// Which per-event value windows are measured in: the iteration index (events
// sharing a timestamp form one iteration) or the raw fixed-point timestamp.
enum class TimeAxis { kEventIteration, kTimestamp };

TimeAxis parse_time_axis(std::string_view name);
std::string_view time_axis_name(TimeAxis axis);

// Half-open interval [lo, hi) on a time axis.
struct Window {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }

  friend bool operator==(const Window&, const Window&) = default;
};

// Two adjoining windows of equal length: (q, r) followed by (r, s).
struct WindowPair {
  Window first;
  Window second;

  Rational q() const { return first.lo; }
  Rational r() const { return first.hi; }
  Rational s() const { return second.hi; }

  friend bool operator==(const WindowPair&, const WindowPair&) = default;
};

struct WindowSchedule {
  TimeAxis axis = TimeAxis::kEventIteration;
  std::vector<WindowPair> pairs;
};

// The covered extent of a stream on an axis: [0, iterations) for the event
// axis and [t_min, t_max + 1) for the timestamp axis (one tick past the last
// event, so the final timestamp is inside the last window).
Window axis_extent(const EventStream& s, TimeAxis axis);

// Minimum axis span accepted by paper_schedule.
inline constexpr std::int64_t kMinScheduleSpan = 10;

inline constexpr std::size_t kPaperWindowCount = 5;
inline constexpr std::size_t kPaperPairCount = 9;

// Splits the extent into five equal windows of length W, halves each window,
// and slides by W/2: pair k covers [k*W/2, k*W/2 + W). Boundaries are exact
// rationals. Throws InputError if the span is shorter than kMinScheduleSpan.
WindowSchedule paper_schedule(const EventStream& s, TimeAxis axis);

// One user window pair given as q:r:s.
struct WindowTriple {
  Rational q;
  Rational r;
  Rational s;
};

// Parses "q:r:s" where each value is an integer or a decimal. `decimals`
// scales decimal values onto the fixed-point timestamp grid.
WindowTriple parse_window_triple(std::string_view text, int decimals = 0);

// Validates q < r < s and r - q == s - r.
WindowSchedule custom_schedule(std::span<const WindowTriple> triples,
                               TimeAxis axis);

// Canonical undirected pair (u < v).
using NodePair = std::pair<NodeId, NodeId>;

// Static graph aggregating all events inside a window. Nodes are the
// endpoints of those events; each undirected pair is stored once with the
// number of events that produced it.
class WindowSnapshot {
 public:
  WindowSnapshot() = default;

  // Aggregates canonical pairs (duplicates allowed, self-loops rejected).
  static WindowSnapshot from_pairs(Window window,
                                   std::span<const NodePair> pairs);

  const Window& window() const { return window_; }

  // Active nodes, ascending by NodeId.
  std::span<const NodeId> active_nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return neighbours_.size() / 2; }
  std::size_t event_count() const { return event_count_; }
  bool empty() const { return nodes_.empty(); }

  // Position of `n` in active_nodes(), if active.
  std::optional<std::size_t> local_index(NodeId n) const;

  // Neighbours of the node at local index `i`, ascending by NodeId.
  std::span<const NodeId> neighbours(std::size_t i) const {
    return {neighbours_.data() + offsets_[i], neighbours_.data() + offsets_[i + 1]};
  }
  // Event counts aligned with neighbours(i).
  std::span<const std::uint32_t> multiplicities(std::size_t i) const {
    return {counts_.data() + offsets_[i], counts_.data() + offsets_[i + 1]};
  }

  std::size_t distinct_degree(std::size_t i) const {
    return offsets_[i + 1] - offsets_[i];
  }
  std::uint64_t event_degree(std::size_t i) const;

  // Events between u and v inside the window (0 when absent).
  std::uint32_t multiplicity(NodeId u, NodeId v) const;

  // Canonical edges (u < v) with their multiplicities, sorted.
  std::vector<std::pair<NodePair, std::uint32_t>> edges() const;

 private:
  Window window_;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbours_;
  std::vector<std::uint32_t> counts_;
  std::size_t event_count_ = 0;
};

// Index range [first, last) of the events whose axis value lies in `w`.
std::pair<std::size_t, std::size_t> event_range(const EventStream& s,
                                                const Window& w,
                                                TimeAxis axis);

WindowSnapshot snapshot(const EventStream& s, const Window& w, TimeAxis axis);

}  // namespace mobility
