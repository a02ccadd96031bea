#include "mobility/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mobility/errors.hpp"
#include "mobility/parallel.hpp"

namespace mobility {

DegreeMode parse_degree_mode(std::string_view name) {
  if (name == "binary") return DegreeMode::kBinary;
  if (name == "multiplicity") return DegreeMode::kMultiplicity;
  throw ConfigError("unknown degree mode '" + std::string(name) +
                    "' (expected binary or multiplicity)");
}

std::string_view degree_mode_name(DegreeMode mode) {
  return mode == DegreeMode::kBinary ? "binary" : "multiplicity";
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: series differ in length");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("pearson: need at least two observations");
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;

  // Deviations scaled by n (n * x_i - sum x) keep small integer inputs exact.
  const auto n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = n * x[i] - sx;
    const double dy = n * y[i] - sy;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::kMobility:
      return "mobility";
    case Statistic::kNeighbourMobility:
      return "neighbour_mobility";
    case Statistic::kPhilanthropy:
      return "philanthropy";
    case Statistic::kCommunity:
      return "community";
    case Statistic::kAssortativity:
      return "assortativity";
    case Statistic::kConsistentAssortativity:
      return "consistent_assortativity";
  }
  return "mobility";
}

std::optional<Statistic> find_statistic(std::string_view name) {
  for (const Statistic s : kAllStatistics) {
    if (statistic_name(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

double node_degree(const WindowSnapshot& snap, std::size_t i, DegreeMode mode) {
  return mode == DegreeMode::kBinary
             ? static_cast<double>(snap.distinct_degree(i))
             : static_cast<double>(snap.event_degree(i));
}

}  // namespace

ConsistentFrame build_frame(const WindowSnapshot& first,
                            const WindowSnapshot& second, DegreeMode mode) {
  if (first.empty()) {
    throw ComputationError("first window is empty: no consistent node set");
  }
  ConsistentFrame f;
  const auto nodes = first.active_nodes();
  const std::size_t n = nodes.size();
  f.nodes.assign(nodes.begin(), nodes.end());
  f.k1.resize(n);
  f.k2.assign(n, 0.0);
  f.l1.resize(n);
  f.l2.resize(n);

  for (std::size_t i = 0; i < n; ++i) f.k1[i] = node_degree(first, i, mode);

  // Both node lists are sorted; walk them together. Nodes missing from the
  // second window keep degree 0.
  const auto other = second.active_nodes();
  std::size_t j = 0;
  for (std::size_t i = 0; i < n && j < other.size(); ++i) {
    while (j < other.size() && other[j] < nodes[i]) ++j;
    if (j < other.size() && other[j] == nodes[i]) {
      f.k2[i] = node_degree(second, j, mode);
    }
  }

  f.neighbour_offsets.assign(1, 0);
  f.neighbour_offsets.reserve(n + 1);
  f.neighbour_index.reserve(2 * first.edge_count());
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = first.neighbours(i);
    double s1 = 0.0;
    double s2 = 0.0;
    for (const NodeId m : nb) {
      const auto local = static_cast<std::uint32_t>(
          std::lower_bound(nodes.begin(), nodes.end(), m) - nodes.begin());
      f.neighbour_index.push_back(local);
      s1 += f.k1[local];
      s2 += f.k2[local];
    }
    f.neighbour_offsets.push_back(f.neighbour_index.size());
    const auto count = static_cast<double>(nb.size());
    f.l1[i] = s1 / count;
    f.l2[i] = s2 / count;
  }
  return f;
}

TaxonomyRecord taxonomy_record(const ConsistentFrame& frame) {
  TaxonomyRecord rec;
  rec.n_consistent = frame.size();
  if (frame.size() < 2) {
    rec.flags |= record_flags::kTooFewNodes;
  } else {
    rec[Statistic::kMobility] = pearson(frame.k1, frame.k2);
    rec[Statistic::kNeighbourMobility] = pearson(frame.l1, frame.l2);
    rec[Statistic::kPhilanthropy] = pearson(frame.k1, frame.l2);
    rec[Statistic::kCommunity] = pearson(frame.l1, frame.k2);
    rec[Statistic::kAssortativity] = pearson(frame.k1, frame.l1);
    rec[Statistic::kConsistentAssortativity] = pearson(frame.k2, frame.l2);
  }
  for (const Statistic s : kAllStatistics) {
    if (!rec[s]) rec.flags |= record_flags::degenerate(s);
  }
  return rec;
}

TaxonomyRecord measure_pair(const WindowSnapshot& first,
                            const WindowSnapshot& second, DegreeMode mode) {
  TaxonomyRecord rec;
  if (first.empty()) {
    rec.flags = record_flags::kEmptyFirstWindow;
    for (const Statistic s : kAllStatistics) {
      rec.flags |= record_flags::degenerate(s);
    }
  } else {
    rec = taxonomy_record(build_frame(first, second, mode));
  }
  rec.pair = {first.window(), second.window()};
  return rec;
}

std::vector<TaxonomyRecord> run_schedule(const EventStream& s,
                                         const WindowSchedule& schedule,
                                         DegreeMode mode,
                                         std::size_t workers) {
  std::vector<TaxonomyRecord> out(schedule.pairs.size());
  parallel_for(schedule.pairs.size(), workers, [&](std::size_t k) {
    const WindowPair& pair = schedule.pairs[k];
    const WindowSnapshot first = snapshot(s, pair.first, schedule.axis);
    const WindowSnapshot second = snapshot(s, pair.second, schedule.axis);
    out[k] = measure_pair(first, second, mode);
    out[k].pair_index = k;
  });
  return out;
}

Correlation degree_assortativity(const WindowSnapshot& snap, DegreeMode mode) {
  const std::size_t n = snap.node_count();
  if (n < 2) return std::nullopt;
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = node_degree(snap, i, mode);
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    const auto nb = snap.neighbours(i);
    for (const NodeId m : nb) sum += k[*snap.local_index(m)];
    l[i] = sum / static_cast<double>(nb.size());
  }
  return pearson(k, l);
}

}  // namespace mobility
