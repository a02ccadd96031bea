#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mobility/growth_models.hpp"
#include "mobility/taxonomy.hpp"

namespace mobility {

enum class Direction { kMaximise, kMinimise };

Direction parse_direction(std::string_view name);
std::string_view direction_name(Direction d);

struct Objective {
  Statistic statistic = Statistic::kMobility;
  Direction direction = Direction::kMaximise;
};

struct OptimizerConfig {
  std::size_t seed_nodes = 3000;
  std::size_t slices = 10;
  std::size_t slice_nodes = 1000;
  // Candidate models tried at every slice, in canonical order.
  std::vector<ModelKind> candidates{kAllModels.begin(), kAllModels.end()};
  ModelParams params;
  std::uint64_t rng_seed = 0;
  std::size_t workers = 1;
  DegreeMode degree_mode = DegreeMode::kMultiplicity;
};

// True when `a` is strictly better than `b` under `direction`. Degenerate
// values lose against every finite value in both directions.
bool better(const Correlation& a, const Correlation& b, Direction direction);

// Outcome of one greedy step.
struct SliceChoice {
  std::size_t slice = 0;  // 1-based
  ModelKind chosen = ModelKind::kRandom;
  // Objective value per model, indexed by model_index(); models outside the
  // candidate set and degenerate values are nullopt. `evaluated` tells them
  // apart.
  std::array<Correlation, kModelCount> candidate_values{};
  std::array<bool, kModelCount> evaluated{};
  TaxonomyRecord record;  // all six statistics of the adopted candidate
};

struct OptimizerTrace {
  Objective objective;
  std::uint64_t rng_seed = 0;
  std::vector<SliceChoice> slices;

  // Whether slice i (0-based, i >= 1) chose a different model than slice i-1.
  bool switched_at(std::size_t i) const {
    return i > 0 && slices[i].chosen != slices[i - 1].chosen;
  }
};

// Deterministic random stream for one (seed, slice, model) combination.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b);

// Seed plus `config.slices` slices grown by `kind` alone, drawing from the
// same random streams optimize_run uses, so the result equals an optimiser
// run that chose `kind` at every slice.
GrowthState generate_network(ModelKind kind, const OptimizerConfig& config);

// Greedy model selection: from a preferential-attachment seed, grow every
// candidate by one slice, keep the one whose objective (previous slice vs
// candidate slice) is best, repeat. Throws ComputationError if every
// candidate is degenerate at some slice.
OptimizerTrace optimize_run(const Objective& objective,
                            const OptimizerConfig& config);

struct SliceSummary {
  std::array<double, kStatisticCount> mean{};
  std::array<double, kStatisticCount> stddev{};  // population (ddof = 0)
  std::array<std::size_t, kStatisticCount> count{};  // finite values
  std::array<std::size_t, kModelCount> choices{};
};

struct EnsembleSummary {
  Objective objective;
  std::uint64_t base_seed = 0;
  std::size_t n_runs = 0;
  std::vector<SliceSummary> slices;
};

EnsembleSummary summarize_ensemble(const Objective& objective,
                                   std::uint64_t base_seed,
                                   std::span<const OptimizerTrace> traces);

// Runs `n_runs` traces with seeds base, base+1, ... and summarises them. The
// traces are returned through `traces_out` when non-null.
EnsembleSummary optimize_ensemble(const Objective& objective,
                                  const OptimizerConfig& config,
                                  std::size_t n_runs,
                                  std::vector<OptimizerTrace>* traces_out =
                                      nullptr);

struct EffectiveRange {
  Statistic statistic = Statistic::kMobility;
  // Minimum slice mean of the minimising ensemble (nullopt when absent).
  std::optional<double> lower;
  // Maximum slice mean of the maximising ensemble (nullopt when absent).
  std::optional<double> upper;
};

// One row per statistic that has at least one ensemble optimising it.
std::vector<EffectiveRange> effective_range_report(
    std::span<const EnsembleSummary> summaries);

}  // namespace mobility
