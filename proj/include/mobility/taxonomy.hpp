#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mobility/event_stream.hpp"
#include "mobility/windowing.hpp"

namespace mobility {

// Whether a node's degree counts distinct neighbours or events.
enum class DegreeMode { kBinary, kMultiplicity };

DegreeMode parse_degree_mode(std::string_view name);
std::string_view degree_mode_name(DegreeMode mode);

// A Pearson correlation; std::nullopt marks a degenerate value (one of the
// series has zero variance).
using Correlation = std::optional<double>;

// Two-pass Pearson correlation. Returns nullopt when either series is
// constant and clamps finite results to [-1, 1]. Throws std::invalid_argument
// if the lengths differ or are below 2.
Correlation pearson(std::span<const double> x, std::span<const double> y);

// The six taxonomy aspects, in output column order.
enum class Statistic {
  kMobility = 0,
  kNeighbourMobility,
  kPhilanthropy,
  kCommunity,
  kAssortativity,
  kConsistentAssortativity,
};

inline constexpr std::size_t kStatisticCount = 6;
inline constexpr std::array<Statistic, kStatisticCount> kAllStatistics = {
    Statistic::kMobility,      Statistic::kNeighbourMobility,
    Statistic::kPhilanthropy,  Statistic::kCommunity,
    Statistic::kAssortativity, Statistic::kConsistentAssortativity,
};

std::string_view statistic_name(Statistic s);
std::optional<Statistic> find_statistic(std::string_view name);

// Degree and mean-neighbour-degree vectors of a window pair, indexed by the
// consistent node set (the active nodes of the first window).
struct ConsistentFrame {
  std::vector<NodeId> nodes;
  // Consistent neighbourhoods from the first window, as CSR over local
  // indices into `nodes`.
  std::vector<std::size_t> neighbour_offsets{0};
  std::vector<std::uint32_t> neighbour_index;
  std::vector<double> k1;
  std::vector<double> k2;
  std::vector<double> l1;
  std::vector<double> l2;

  std::size_t size() const { return nodes.size(); }
  std::span<const std::uint32_t> neighbourhood(std::size_t i) const {
    return {neighbour_index.data() + neighbour_offsets[i],
            neighbour_index.data() + neighbour_offsets[i + 1]};
  }
};

// Throws ComputationError if `first` is empty.
ConsistentFrame build_frame(const WindowSnapshot& first,
                            const WindowSnapshot& second, DegreeMode mode);

// Flag bits carried by a TaxonomyRecord.
namespace record_flags {
// Bit i set: statistic i is degenerate.
constexpr std::uint32_t degenerate(Statistic s) {
  return 1u << static_cast<unsigned>(s);
}
inline constexpr std::uint32_t kEmptyFirstWindow = 1u << 6;
inline constexpr std::uint32_t kTooFewNodes = 1u << 7;
}  // namespace record_flags

struct TaxonomyRecord {
  std::size_t pair_index = 0;
  WindowPair pair;
  std::size_t n_consistent = 0;
  std::array<Correlation, kStatisticCount> values{};
  std::uint32_t flags = 0;

  const Correlation& operator[](Statistic s) const {
    return values[static_cast<std::size_t>(s)];
  }
  Correlation& operator[](Statistic s) {
    return values[static_cast<std::size_t>(s)];
  }
};

TaxonomyRecord taxonomy_record(const ConsistentFrame& frame);

// Measures both windows of a pair. A pair whose first window is empty gives an
// all-degenerate record flagged kEmptyFirstWindow.
TaxonomyRecord measure_pair(const WindowSnapshot& first,
                            const WindowSnapshot& second, DegreeMode mode);

// One record per schedule pair, in schedule order. Pairs are processed on up
// to `workers` threads; results do not depend on the worker count.
std::vector<TaxonomyRecord> run_schedule(const EventStream& s,
                                         const WindowSchedule& schedule,
                                         DegreeMode mode,
                                         std::size_t workers = 1);

// Degree versus mean neighbour degree over a single snapshot.
Correlation degree_assortativity(const WindowSnapshot& snap, DegreeMode mode);

}  // namespace mobility
