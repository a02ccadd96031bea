#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobility/analysis.hpp"
#include "mobility/growth_models.hpp"
#include "mobility/optimizer.hpp"
#include "mobility/taxonomy.hpp"

namespace mobility {

inline constexpr std::string_view kVersion = "0.1.0";

// Shortest round-trip decimal form of a double.
std::string format_double(double v);
// Empty string for degenerate values.
std::string format_correlation(const Correlation& c);

// Columns: pair_index,q,r,s,n_consistent,<six statistics>,flags. Axis values
// are printed in the stream's units (`time_decimals` for the time axis).
std::vector<std::string> taxonomy_csv_header();
void write_taxonomy_csv(std::ostream& out,
                        const std::vector<TaxonomyRecord>& records,
                        int time_decimals = 0);
nlohmann::json taxonomy_json(const std::vector<TaxonomyRecord>& records,
                             int time_decimals = 0);

// A taxonomy CSV read back for analysis: pair index plus the six values.
struct TaxonomyCsvRow {
  std::size_t pair_index = 0;
  TaxonomyRow values{};
  unsigned flags = 0;
};
std::vector<TaxonomyCsvRow> parse_taxonomy_csv(std::string_view text);

// src,dst,time with the growth iteration as the timestamp.
void write_growth_trace(std::ostream& out,
                        std::span<const GrowthEvent> events);

// slice,chosen_model,<candidate value per model>,<six statistics>,switched
void write_optimizer_trace(std::ostream& out, const OptimizerTrace& trace);
// slice,<stat>_mean,<stat>_std,<stat>_count...,choices_<model>...
void write_ensemble_summary(std::ostream& out, const EnsembleSummary& summary);

nlohmann::json objective_json(const Objective& o);
nlohmann::json trace_json(const OptimizerTrace& trace);
nlohmann::json ensemble_json(const EnsembleSummary& summary);

}  // namespace mobility
