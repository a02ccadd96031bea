#include "mobility/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mobility/csv.hpp"
#include "mobility/errors.hpp"

namespace mobility {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_correlation(const Correlation& c) {
  return c ? format_double(*c) : std::string();
}

namespace {

nlohmann::json correlation_json(const Correlation& c) {
  return c ? nlohmann::json(*c) : nlohmann::json(nullptr);
}

nlohmann::json statistics_json(const TaxonomyRecord& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const Statistic s : kAllStatistics) {
    j[std::string(statistic_name(s))] = correlation_json(r[s]);
  }
  return j;
}

}  // namespace

std::vector<std::string> taxonomy_csv_header() {
  std::vector<std::string> h{"pair_index", "q", "r", "s", "n_consistent"};
  for (const Statistic s : kAllStatistics) h.emplace_back(statistic_name(s));
  h.emplace_back("flags");
  return h;
}

void write_taxonomy_csv(std::ostream& out,
                        const std::vector<TaxonomyRecord>& records,
                        int time_decimals) {
  csv::write_row(out, taxonomy_csv_header());
  for (const auto& r : records) {
    std::vector<std::string> row{std::to_string(r.pair_index),
                                 r.pair.q().to_string(time_decimals),
                                 r.pair.r().to_string(time_decimals),
                                 r.pair.s().to_string(time_decimals),
                                 std::to_string(r.n_consistent)};
    for (const auto& v : r.values) row.push_back(format_correlation(v));
    row.push_back(std::to_string(r.flags));
    csv::write_row(out, row);
  }
}

nlohmann::json taxonomy_json(const std::vector<TaxonomyRecord>& records,
                             int time_decimals) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({{"pair_index", r.pair_index},
                    {"q", r.pair.q().to_string(time_decimals)},
                    {"r", r.pair.r().to_string(time_decimals)},
                    {"s", r.pair.s().to_string(time_decimals)},
                    {"n_consistent", r.n_consistent},
                    {"statistics", statistics_json(r)},
                    {"flags", r.flags}});
  }
  return rows;
}

std::vector<TaxonomyCsvRow> parse_taxonomy_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError(0, "taxonomy CSV is empty");
  const auto& header = rows.front();
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto pair_col = column("pair_index");
  if (!pair_col) throw ParseError(1, "missing column 'pair_index'");
  std::array<std::size_t, kStatisticCount> stat_col{};
  for (const Statistic s : kAllStatistics) {
    const auto c = column(statistic_name(s));
    if (!c) {
      throw ParseError(1, "missing column '" +
                              std::string(statistic_name(s)) + "'");
    }
    stat_col[static_cast<std::size_t>(s)] = *c;
  }
  const auto flags_col = column("flags");

  auto parse_number = [](const std::string& f, std::size_t line, auto& out) {
    const auto res = std::from_chars(f.data(), f.data() + f.size(), out);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw ParseError(line, "malformed number '" + f + "'");
    }
  };

  std::vector<TaxonomyCsvRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::size_t line = i + 1;
    if (row.size() != header.size()) {
      throw ParseError(line, "expected " + std::to_string(header.size()) +
                                 " fields, got " + std::to_string(row.size()));
    }
    TaxonomyCsvRow r;
    parse_number(row[*pair_col], line, r.pair_index);
    for (std::size_t k = 0; k < kStatisticCount; ++k) {
      const std::string& f = row[stat_col[k]];
      if (f.empty()) continue;
      double v = 0.0;
      parse_number(f, line, v);
      r.values[k] = v;
    }
    if (flags_col && !row[*flags_col].empty()) {
      parse_number(row[*flags_col], line, r.flags);
    }
    out.push_back(r);
  }
  return out;
}

void write_growth_trace(std::ostream& out,
                        std::span<const GrowthEvent> events) {
  out << "src,dst,time\n";
  for (const auto& e : events) {
    out << e.u << ',' << e.v << ',' << e.iteration << '\n';
  }
}

void write_optimizer_trace(std::ostream& out, const OptimizerTrace& trace) {
  std::vector<std::string> header{"slice", "chosen_model"};
  for (const ModelKind m : kAllModels) header.emplace_back(model_name(m));
  for (const Statistic s : kAllStatistics) header.emplace_back(statistic_name(s));
  header.emplace_back("switched");
  csv::write_row(out, header);
  for (std::size_t i = 0; i < trace.slices.size(); ++i) {
    const SliceChoice& c = trace.slices[i];
    std::vector<std::string> row{std::to_string(c.slice),
                                 std::string(model_name(c.chosen))};
    for (const auto& v : c.candidate_values) row.push_back(format_correlation(v));
    for (const auto& v : c.record.values) row.push_back(format_correlation(v));
    row.push_back(trace.switched_at(i) ? "1" : "0");
    csv::write_row(out, row);
  }
}

void write_ensemble_summary(std::ostream& out, const EnsembleSummary& summary) {
  std::vector<std::string> header{"slice"};
  for (const Statistic s : kAllStatistics) {
    const std::string name(statistic_name(s));
    header.push_back(name + "_mean");
    header.push_back(name + "_std");
    header.push_back(name + "_count");
  }
  for (const ModelKind m : kAllModels) {
    header.push_back("choices_" + std::string(model_name(m)));
  }
  csv::write_row(out, header);
  for (std::size_t i = 0; i < summary.slices.size(); ++i) {
    const SliceSummary& s = summary.slices[i];
    std::vector<std::string> row{std::to_string(i + 1)};
    for (std::size_t k = 0; k < kStatisticCount; ++k) {
      if (s.count[k] == 0) {
        row.insert(row.end(), {"", "", "0"});
      } else {
        row.push_back(format_double(s.mean[k]));
        row.push_back(format_double(s.stddev[k]));
        row.push_back(std::to_string(s.count[k]));
      }
    }
    for (const auto c : s.choices) row.push_back(std::to_string(c));
    csv::write_row(out, row);
  }
}

nlohmann::json objective_json(const Objective& o) {
  return {{"statistic", statistic_name(o.statistic)},
          {"direction", direction_name(o.direction)}};
}

nlohmann::json trace_json(const OptimizerTrace& trace) {
  nlohmann::json slices = nlohmann::json::array();
  for (std::size_t i = 0; i < trace.slices.size(); ++i) {
    const SliceChoice& c = trace.slices[i];
    nlohmann::json candidates = nlohmann::json::object();
    for (const ModelKind m : kAllModels) {
      if (c.evaluated[model_index(m)]) {
        candidates[std::string(model_name(m))] =
            correlation_json(c.candidate_values[model_index(m)]);
      }
    }
    slices.push_back({{"slice", c.slice},
                      {"chosen_model", model_name(c.chosen)},
                      {"candidates", candidates},
                      {"statistics", statistics_json(c.record)},
                      {"switched", trace.switched_at(i)}});
  }
  return {{"objective", objective_json(trace.objective)},
          {"rng_seed", trace.rng_seed},
          {"slices", slices}};
}

nlohmann::json ensemble_json(const EnsembleSummary& summary) {
  nlohmann::json slices = nlohmann::json::array();
  for (std::size_t i = 0; i < summary.slices.size(); ++i) {
    const SliceSummary& s = summary.slices[i];
    nlohmann::json stats = nlohmann::json::object();
    for (const Statistic st : kAllStatistics) {
      const auto k = static_cast<std::size_t>(st);
      nlohmann::json cell = {{"count", s.count[k]}};
      cell["mean"] = s.count[k] ? nlohmann::json(s.mean[k]) : nlohmann::json(nullptr);
      cell["std"] = s.count[k] ? nlohmann::json(s.stddev[k]) : nlohmann::json(nullptr);
      stats[std::string(statistic_name(st))] = cell;
    }
    nlohmann::json choices = nlohmann::json::object();
    for (const ModelKind m : kAllModels) {
      choices[std::string(model_name(m))] = s.choices[model_index(m)];
    }
    slices.push_back({{"slice", i + 1}, {"statistics", stats}, {"choices", choices}});
  }
  return {{"objective", objective_json(summary.objective)},
          {"base_seed", summary.base_seed},
          {"runs", summary.n_runs},
          {"slices", slices}};
}

}  // namespace mobility
