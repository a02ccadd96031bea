#include "mobility/windowing.hpp"

#include <algorithm>
#include <numeric>

#include "mobility/errors.hpp"

namespace mobility {

TimeAxis parse_time_axis(std::string_view name) {
  if (name == "events" || name == "event" || name == "iteration") {
    return TimeAxis::kEventIteration;
  }
  if (name == "time" || name == "timestamp") return TimeAxis::kTimestamp;
  throw ConfigError("unknown axis '" + std::string(name) +
                    "' (expected events or time)");
}

std::string_view time_axis_name(TimeAxis axis) {
  return axis == TimeAxis::kEventIteration ? "events" : "time";
}

Window axis_extent(const EventStream& s, TimeAxis axis) {
  if (s.empty()) return {Rational(0), Rational(0)};
  if (axis == TimeAxis::kEventIteration) {
    return {Rational(0),
            Rational(static_cast<std::int64_t>(s.iteration_count()))};
  }
  return {Rational(s.events().front().t), Rational(s.events().back().t + 1)};
}

WindowSchedule paper_schedule(const EventStream& s, TimeAxis axis) {
  const Window extent = axis_extent(s, axis);
  const Rational span = extent.length();
  if (span < Rational(kMinScheduleSpan)) {
    throw InputError("axis span " + span.to_string() + " (" +
                     std::string(time_axis_name(axis)) +
                     ") is shorter than the minimum of " +
                     std::to_string(kMinScheduleSpan) +
                     " required for the five-window schedule");
  }
  const auto halves = static_cast<std::int64_t>(2 * kPaperWindowCount);
  std::vector<Rational> bounds;
  bounds.reserve(halves + 1);
  for (std::int64_t j = 0; j <= halves; ++j) {
    bounds.push_back(extent.lo + span * Rational(j, halves));
  }
  WindowSchedule schedule;
  schedule.axis = axis;
  for (std::size_t k = 0; k < kPaperPairCount; ++k) {
    schedule.pairs.push_back(
        {{bounds[k], bounds[k + 1]}, {bounds[k + 1], bounds[k + 2]}});
  }
  return schedule;
}

WindowTriple parse_window_triple(std::string_view text, int decimals) {
  auto parse_value = [&](std::string_view v) {
    const auto dot = v.find('.');
    const std::string_view whole = v.substr(0, dot);
    const std::string_view frac =
        dot == std::string_view::npos ? std::string_view{} : v.substr(dot + 1);
    auto digits = [](std::string_view d) {
      return std::all_of(d.begin(), d.end(),
                         [](char c) { return c >= '0' && c <= '9'; });
    };
    if ((whole.empty() && frac.empty()) || !digits(whole) || !digits(frac) ||
        whole.size() + frac.size() > 17) {
      throw ConfigError("malformed window value '" + std::string(v) +
                        "' in '" + std::string(text) + "'");
    }
    std::int64_t mantissa = 0;
    for (const char c : whole) mantissa = mantissa * 10 + (c - '0');
    std::int64_t den = 1;
    for (const char c : frac) {
      mantissa = mantissa * 10 + (c - '0');
      den *= 10;
    }
    Rational r(mantissa, den);
    for (int i = 0; i < decimals; ++i) r = r * Rational(10);
    return r;
  };
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) {
    throw ConfigError("window must be q:r:s, got '" + std::string(text) + "'");
  }
  return {parse_value(parts[0]), parse_value(parts[1]), parse_value(parts[2])};
}

WindowSchedule custom_schedule(std::span<const WindowTriple> triples,
                               TimeAxis axis) {
  if (triples.empty()) throw ConfigError("custom schedule has no windows");
  WindowSchedule schedule;
  schedule.axis = axis;
  for (const auto& t : triples) {
    if (!(t.q < t.r && t.r < t.s)) {
      throw ConfigError("window " + t.q.to_string() + ":" + t.r.to_string() +
                        ":" + t.s.to_string() + " is not increasing");
    }
    if (t.r - t.q != t.s - t.r) {
      throw ConfigError("window " + t.q.to_string() + ":" + t.r.to_string() +
                        ":" + t.s.to_string() +
                        " has sub-windows of unequal length");
    }
    schedule.pairs.push_back({{t.q, t.r}, {t.r, t.s}});
  }
  return schedule;
}

WindowSnapshot WindowSnapshot::from_pairs(Window window,
                                          std::span<const NodePair> pairs) {
  WindowSnapshot snap;
  snap.window_ = window;
  snap.event_count_ = pairs.size();
  if (pairs.empty()) return snap;

  std::vector<std::uint64_t> keys;
  keys.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    if (u == v) throw InputError("self-loop in snapshot");
    const NodeId a = std::min(u, v);
    const NodeId b = std::max(u, v);
    keys.push_back((static_cast<std::uint64_t>(a) << 32) | b);
  }
  std::sort(keys.begin(), keys.end());

  std::vector<std::uint64_t> unique_keys;
  std::vector<std::uint32_t> unique_counts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    unique_keys.push_back(keys[i]);
    unique_counts.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }

  snap.nodes_.reserve(unique_keys.size() * 2);
  for (const auto key : unique_keys) {
    snap.nodes_.push_back(static_cast<NodeId>(key >> 32));
    snap.nodes_.push_back(static_cast<NodeId>(key & 0xffffffffu));
  }
  std::sort(snap.nodes_.begin(), snap.nodes_.end());
  snap.nodes_.erase(std::unique(snap.nodes_.begin(), snap.nodes_.end()),
                    snap.nodes_.end());

  const std::size_t n = snap.nodes_.size();
  auto local = [&](NodeId id) {
    return static_cast<std::size_t>(
        std::lower_bound(snap.nodes_.begin(), snap.nodes_.end(), id) -
        snap.nodes_.begin());
  };
  std::vector<std::size_t> lu(unique_keys.size());
  std::vector<std::size_t> lv(unique_keys.size());
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t e = 0; e < unique_keys.size(); ++e) {
    lu[e] = local(static_cast<NodeId>(unique_keys[e] >> 32));
    lv[e] = local(static_cast<NodeId>(unique_keys[e] & 0xffffffffu));
    ++degree[lu[e]];
    ++degree[lv[e]];
  }
  snap.offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), snap.offsets_.begin() + 1);
  snap.neighbours_.resize(snap.offsets_[n]);
  snap.counts_.resize(snap.offsets_[n]);
  std::vector<std::size_t> fill(snap.offsets_.begin(), snap.offsets_.end() - 1);
  // Keys are sorted by (u, v), so every neighbour list fills in ascending
  // order: first the smaller endpoints, then the larger ones.
  for (std::size_t e = 0; e < unique_keys.size(); ++e) {
    const std::size_t a = lu[e];
    const std::size_t b = lv[e];
    snap.neighbours_[fill[a]] = snap.nodes_[b];
    snap.counts_[fill[a]++] = unique_counts[e];
    snap.neighbours_[fill[b]] = snap.nodes_[a];
    snap.counts_[fill[b]++] = unique_counts[e];
  }
  return snap;
}

std::optional<std::size_t> WindowSnapshot::local_index(NodeId n) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::uint64_t WindowSnapshot::event_degree(std::size_t i) const {
  const auto c = multiplicities(i);
  return std::accumulate(c.begin(), c.end(), std::uint64_t{0});
}

std::uint32_t WindowSnapshot::multiplicity(NodeId u, NodeId v) const {
  const auto i = local_index(u);
  if (!i) return 0;
  const auto nb = neighbours(*i);
  const auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0;
  return multiplicities(*i)[static_cast<std::size_t>(it - nb.begin())];
}

std::vector<std::pair<NodePair, std::uint32_t>> WindowSnapshot::edges() const {
  std::vector<std::pair<NodePair, std::uint32_t>> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto nb = neighbours(i);
    const auto counts = multiplicities(i);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      if (nb[j] > nodes_[i]) out.push_back({{nodes_[i], nb[j]}, counts[j]});
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> event_range(const EventStream& s,
                                                const Window& w,
                                                TimeAxis axis) {
  // Axis values are integers, so x in [lo, hi) iff ceil(lo) <= x < ceil(hi).
  const std::int64_t lo = w.lo.ceil();
  const std::int64_t hi = w.hi.ceil();
  if (hi <= lo) return {0, 0};
  if (axis == TimeAxis::kEventIteration) {
    const auto it = s.iterations();
    auto first = std::lower_bound(it.begin(), it.end(), lo,
                                  [](std::uint32_t x, std::int64_t v) {
                                    return static_cast<std::int64_t>(x) < v;
                                  });
    auto last = std::lower_bound(first, it.end(), hi,
                                 [](std::uint32_t x, std::int64_t v) {
                                   return static_cast<std::int64_t>(x) < v;
                                 });
    return {static_cast<std::size_t>(first - it.begin()),
            static_cast<std::size_t>(last - it.begin())};
  }
  const auto ev = s.events();
  auto first = std::lower_bound(
      ev.begin(), ev.end(), lo,
      [](const EdgeEvent& e, std::int64_t v) { return e.t < v; });
  auto last = std::lower_bound(
      first, ev.end(), hi,
      [](const EdgeEvent& e, std::int64_t v) { return e.t < v; });
  return {static_cast<std::size_t>(first - ev.begin()),
          static_cast<std::size_t>(last - ev.begin())};
}

WindowSnapshot snapshot(const EventStream& s, const Window& w, TimeAxis axis) {
  const auto [first, last] = event_range(s, w, axis);
  std::vector<NodePair> pairs;
  pairs.reserve(last - first);
  const auto ev = s.events();
  for (std::size_t i = first; i < last; ++i) pairs.push_back({ev[i].u, ev[i].v});
  return WindowSnapshot::from_pairs(w, pairs);
}

}  // namespace mobility
