#include "mobility/event_stream.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <iterator>
#include <limits>
#include <sstream>

#include "mobility/errors.hpp"

namespace mobility {
namespace {

constexpr NodeId kUnset = std::numeric_limits<NodeId>::max();
// Timestamps are multiplied by up to 10 when window boundaries are formed.
constexpr Timestamp kMaxTicks = std::numeric_limits<Timestamp>::max() / 16;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void split_fields(std::string_view line, Delimiter d,
                  std::vector<std::string_view>& out) {
  out.clear();
  if (d == Delimiter::kWhitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return;
  }
  const char sep = d == Delimiter::kComma ? ',' : '\t';
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
}

struct FixedPoint {
  std::int64_t mantissa = 0;
  int decimals = 0;
};

// Parses "123", "123.45" or ".5" (no sign, no exponent).
std::optional<FixedPoint> parse_fixed_point(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  auto all_digits = [](std::string_view v) {
    return std::all_of(v.begin(), v.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
  while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
  if (frac.size() > static_cast<std::size_t>(kMaxTimeDecimals)) {
    return std::nullopt;
  }
  FixedPoint fp;
  fp.decimals = static_cast<int>(frac.size());
  std::int64_t value = 0;
  for (const char c : whole) {
    if (value > (kMaxTicks - (c - '0')) / 10) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  for (const char c : frac) {
    if (value > (kMaxTicks - (c - '0')) / 10) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  fp.mantissa = value;
  return fp;
}

}  // namespace

NodeId NodeLabels::intern(std::string_view label) {
  auto [it, inserted] =
      ids_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

std::optional<NodeId> NodeLabels::find(std::string_view label) const {
  const auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

EventStream EventStream::build(std::vector<EdgeEvent> events,
                               const NodeLabels& labels, int time_decimals,
                               std::size_t self_loops_dropped) {
  std::stable_sort(events.begin(), events.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) {
                     return a.t < b.t;
                   });
  EventStream s;
  s.time_decimals_ = time_decimals;
  s.self_loops_dropped_ = self_loops_dropped;
  std::vector<NodeId> remap(labels.size(), kUnset);
  auto resolve = [&](NodeId old) {
    if (remap.at(old) == kUnset) remap[old] = s.labels_.intern(labels.label(old));
    return remap[old];
  };
  s.iterations_.reserve(events.size());
  std::uint32_t iteration = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    EdgeEvent& e = events[i];
    if (e.u == e.v) throw InputError("self-loop passed to EventStream::build");
    const NodeId u = resolve(e.u);
    const NodeId v = resolve(e.v);
    e.u = std::min(u, v);
    e.v = std::max(u, v);
    if (i > 0 && e.t != events[i - 1].t) ++iteration;
    s.iterations_.push_back(iteration);
  }
  s.events_ = std::move(events);
  return s;
}

EventStream EventStream::from_pairs(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs,
    std::span<const Timestamp> times) {
  if (pairs.size() != times.size()) {
    throw std::invalid_argument("pairs and times differ in length");
  }
  NodeLabels labels;
  std::vector<EdgeEvent> events;
  events.reserve(pairs.size());
  std::size_t loops = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first == pairs[i].second) {
      ++loops;
      continue;
    }
    if (times[i] < 0) throw InputError("negative timestamp");
    const NodeId u = labels.intern(std::to_string(pairs[i].first));
    const NodeId v = labels.intern(std::to_string(pairs[i].second));
    events.push_back({u, v, times[i]});
  }
  return build(std::move(events), labels, 0, loops);
}

FormatSpec FormatSpec::from_columns(std::string_view columns) {
  FormatSpec spec;
  std::optional<std::size_t> src, dst, time;
  std::size_t index = 0;
  std::size_t start = 0;
  while (true) {
    const auto pos = columns.find(',', start);
    const std::string_view name = trim(columns.substr(start, pos - start));
    auto assign = [&](std::optional<std::size_t>& slot) {
      if (slot) {
        throw ConfigError("column '" + std::string(name) +
                          "' listed twice in format");
      }
      slot = index;
    };
    if (name == "src") {
      assign(src);
    } else if (name == "dst") {
      assign(dst);
    } else if (name == "time") {
      assign(time);
    } else if (name.empty()) {
      throw ConfigError("empty column name in format '" +
                        std::string(columns) + "'");
    }
    ++index;
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (!src || !dst || !time) {
    throw ConfigError("format must name src, dst and time columns: '" +
                      std::string(columns) + "'");
  }
  spec.source_column = *src;
  spec.target_column = *dst;
  spec.time_column = *time;
  return spec;
}

std::string FormatSpec::columns() const {
  const std::size_t n =
      std::max({source_column, target_column, time_column}) + 1;
  std::vector<std::string> names(n, "_");
  names[source_column] = "src";
  names[target_column] = "dst";
  names[time_column] = "time";
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

Delimiter parse_delimiter(std::string_view name) {
  if (name == "whitespace" || name == "space" || name == " ") {
    return Delimiter::kWhitespace;
  }
  if (name == "comma" || name == ",") return Delimiter::kComma;
  if (name == "tab" || name == "\t" || name == "\\t") return Delimiter::kTab;
  throw ConfigError("unknown delimiter '" + std::string(name) +
                    "' (expected whitespace, comma or tab)");
}

std::string_view delimiter_name(Delimiter d) {
  switch (d) {
    case Delimiter::kWhitespace:
      return "whitespace";
    case Delimiter::kComma:
      return "comma";
    case Delimiter::kTab:
      return "tab";
  }
  return "whitespace";
}

EventStream parse_edge_list(std::string_view text, const FormatSpec& format) {
  const std::size_t needed =
      std::max({format.source_column, format.target_column,
                format.time_column}) + 1;
  NodeLabels labels;
  std::vector<EdgeEvent> events;
  std::vector<int> decimals;
  std::size_t loops = 0;
  bool header_pending = format.has_header;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (!format.comment_prefix.empty() &&
        body.starts_with(format.comment_prefix)) {
      continue;
    }
    if (header_pending) {
      header_pending = false;
      continue;
    }
    split_fields(line, format.delimiter, fields);
    if (fields.size() < needed) {
      throw ParseError(line_no, "expected at least " + std::to_string(needed) +
                                    " columns, found " +
                                    std::to_string(fields.size()));
    }
    const std::string_view src = fields[format.source_column];
    const std::string_view dst = fields[format.target_column];
    const std::string_view time = fields[format.time_column];
    if (src.empty() || dst.empty()) {
      throw ParseError(line_no, "empty node label");
    }
    const auto fp = parse_fixed_point(time);
    if (!fp) {
      throw ParseError(line_no, "malformed timestamp '" + std::string(time) +
                                    "' (expected a non-negative number with "
                                    "at most " +
                                    std::to_string(kMaxTimeDecimals) +
                                    " decimals)");
    }
    if (src == dst) {
      ++loops;
      continue;
    }
    const NodeId u = labels.intern(src);
    const NodeId v = labels.intern(dst);
    events.push_back({u, v, fp->mantissa});
    decimals.push_back(fp->decimals);
  }
  if (events.empty()) {
    throw ParseError(0, "edge list contains no events");
  }
  const int max_decimals = *std::max_element(decimals.begin(), decimals.end());
  if (max_decimals > 0) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      for (int d = decimals[i]; d < max_decimals; ++d) {
        if (events[i].t > kMaxTicks / 10) {
          throw ParseError(0, "timestamp out of range after fixed-point "
                              "scaling");
        }
        events[i].t *= 10;
      }
    }
  }
  return EventStream::build(std::move(events), labels, max_decimals, loops);
}

EventStream parse_edge_list(std::istream& in, const FormatSpec& format) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return parse_edge_list(text, format);
}

std::string read_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw InputError("cannot open '" + path + "'");
  std::string out;
  char buf[1 << 16];
  while (true) {
    const int n = gzread(f, buf, sizeof buf);
    if (n < 0) {
      int code = 0;
      const std::string msg = gzerror(f, &code);
      gzclose(f);
      throw InputError("error reading '" + path + "': " + msg);
    }
    if (n == 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  gzclose(f);
  return out;
}

EventStream read_edge_list(const std::string& path, const FormatSpec& format) {
  return parse_edge_list(read_file(path), format);
}

StreamStats stream_stats(const EventStream& s) {
  StreamStats st;
  st.nodes = s.node_count();
  st.events = s.event_count();
  st.iterations = s.iteration_count();
  st.time_decimals = s.time_decimals();
  st.self_loops_dropped = s.self_loops_dropped();
  if (!s.empty()) {
    st.t_min = s.events().front().t;
    st.t_max = s.events().back().t;
  }
  return st;
}

std::string format_timestamp(Timestamp t, int decimals) {
  std::string digits = std::to_string(t);
  if (decimals <= 0) return digits;
  const auto d = static_cast<std::size_t>(decimals);
  if (digits.size() <= d) digits.insert(0, d - digits.size() + 1, '0');
  std::string whole = digits.substr(0, digits.size() - d);
  std::string frac = digits.substr(digits.size() - d);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return frac.empty() ? whole : whole + "." + frac;
}

}  // namespace mobility
