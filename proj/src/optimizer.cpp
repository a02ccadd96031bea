#include "mobility/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mobility/errors.hpp"
#include "mobility/parallel.hpp"

namespace mobility {

Direction parse_direction(std::string_view name) {
  if (name == "max" || name == "maximise" || name == "maximize") {
    return Direction::kMaximise;
  }
  if (name == "min" || name == "minimise" || name == "minimize") {
    return Direction::kMinimise;
  }
  throw ConfigError("unknown direction '" + std::string(name) +
                    "' (expected max or min)");
}

std::string_view direction_name(Direction d) {
  return d == Direction::kMaximise ? "max" : "min";
}

bool better(const Correlation& a, const Correlation& b, Direction direction) {
  if (!a) return false;
  if (!b) return true;
  return direction == Direction::kMaximise ? *a > *b : *a < *b;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0xd1b54a32d192ed03ull));
}

namespace {

WindowSnapshot slice_snapshot(std::span<const GrowthEvent> events) {
  std::vector<NodePair> pairs;
  pairs.reserve(events.size());
  for (const auto& e : events) pairs.push_back({e.u, e.v});
  Window w;
  if (!events.empty()) {
    w = {Rational(static_cast<std::int64_t>(events.front().iteration)),
         Rational(static_cast<std::int64_t>(events.back().iteration) + 1)};
  }
  return WindowSnapshot::from_pairs(w, pairs);
}

std::vector<ModelKind> canonical_candidates(const std::vector<ModelKind>& in) {
  const std::set<ModelKind> unique(in.begin(), in.end());
  return {unique.begin(), unique.end()};
}

struct Candidate {
  GrowthState state;
  TaxonomyRecord record;
  WindowSnapshot snapshot;
};

}  // namespace

GrowthState generate_network(ModelKind kind, const OptimizerConfig& config) {
  Rng seed_rng(derive_seed(config.rng_seed, 0, 0));
  GrowthState state = init_seed(config.seed_nodes, seed_rng, config.params);
  for (std::size_t slice = 1; slice <= config.slices; ++slice) {
    Rng rng(derive_seed(config.rng_seed, slice, model_index(kind) + 1));
    grow_slice(state, kind, config.slice_nodes, config.params, rng);
  }
  return state;
}

OptimizerTrace optimize_run(const Objective& objective,
                            const OptimizerConfig& config) {
  if (config.slice_nodes == 0) throw ConfigError("slice_nodes must be >= 1");
  const std::vector<ModelKind> candidates =
      canonical_candidates(config.candidates);
  if (candidates.empty()) throw ConfigError("no candidate models");

  OptimizerTrace trace;
  trace.objective = objective;
  trace.rng_seed = config.rng_seed;

  Rng seed_rng(derive_seed(config.rng_seed, 0, 0));
  GrowthState state = init_seed(config.seed_nodes, seed_rng, config.params);

  // The seed's final slice_nodes iterations (or all of it when shorter) play
  // the role of the slice before the first candidate slice.
  const std::uint64_t last = state.iteration();
  const std::uint64_t cut = last >= config.slice_nodes ? last - config.slice_nodes
                                                       : 0;
  const auto events = state.events();
  const auto from = std::find_if(events.begin(), events.end(),
                                 [&](const GrowthEvent& e) {
                                   return cut == 0 || e.iteration > cut;
                                 });
  WindowSnapshot previous = slice_snapshot({from, events.end()});

  for (std::size_t slice = 1; slice <= config.slices; ++slice) {
    std::vector<Candidate> cands(candidates.size());
    parallel_for(candidates.size(), config.workers, [&](std::size_t j) {
      const ModelKind kind = candidates[j];
      Candidate& c = cands[j];
      c.state = state;
      Rng rng(derive_seed(config.rng_seed, slice, model_index(kind) + 1));
      const auto slice_events =
          grow_slice(c.state, kind, config.slice_nodes, config.params, rng);
      c.snapshot = slice_snapshot(slice_events);
      c.record = measure_pair(previous, c.snapshot, config.degree_mode);
      c.record.pair_index = slice - 1;
    });

    SliceChoice choice;
    choice.slice = slice;
    std::size_t best = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const Correlation& v = cands[j].record[objective.statistic];
      choice.candidate_values[model_index(candidates[j])] = v;
      choice.evaluated[model_index(candidates[j])] = true;
      if (better(v, cands[best].record[objective.statistic],
                 objective.direction)) {
        best = j;
      }
    }
    if (!cands[best].record[objective.statistic]) {
      throw ComputationError(
          "slice " + std::to_string(slice) + ": every candidate gives a "
          "degenerate " + std::string(statistic_name(objective.statistic)));
    }
    choice.chosen = candidates[best];
    choice.record = cands[best].record;
    trace.slices.push_back(std::move(choice));
    state = std::move(cands[best].state);
    previous = std::move(cands[best].snapshot);
  }
  return trace;
}

EnsembleSummary summarize_ensemble(const Objective& objective,
                                   std::uint64_t base_seed,
                                   std::span<const OptimizerTrace> traces) {
  EnsembleSummary summary;
  summary.objective = objective;
  summary.base_seed = base_seed;
  summary.n_runs = traces.size();
  if (traces.empty()) return summary;
  const std::size_t slices = traces.front().slices.size();
  for (const auto& t : traces) {
    if (t.slices.size() != slices) {
      throw std::invalid_argument("traces differ in slice count");
    }
  }
  summary.slices.resize(slices);
  for (std::size_t i = 0; i < slices; ++i) {
    SliceSummary& out = summary.slices[i];
    for (const auto& t : traces) ++out.choices[model_index(t.slices[i].chosen)];
    for (const Statistic s : kAllStatistics) {
      const auto k = static_cast<std::size_t>(s);
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& t : traces) {
        if (const auto& v = t.slices[i].record[s]) {
          sum += *v;
          ++count;
        }
      }
      out.count[k] = count;
      if (count == 0) continue;
      const double mean = sum / static_cast<double>(count);
      double ss = 0.0;
      for (const auto& t : traces) {
        if (const auto& v = t.slices[i].record[s]) {
          ss += (*v - mean) * (*v - mean);
        }
      }
      out.mean[k] = mean;
      out.stddev[k] = std::sqrt(ss / static_cast<double>(count));
    }
  }
  return summary;
}

EnsembleSummary optimize_ensemble(const Objective& objective,
                                  const OptimizerConfig& config,
                                  std::size_t n_runs,
                                  std::vector<OptimizerTrace>* traces_out) {
  if (n_runs == 0) throw ConfigError("an ensemble needs at least one run");
  std::vector<OptimizerTrace> traces;
  traces.reserve(n_runs);
  for (std::size_t k = 0; k < n_runs; ++k) {
    OptimizerConfig run = config;
    run.rng_seed = config.rng_seed + k;
    traces.push_back(optimize_run(objective, run));
  }
  EnsembleSummary summary =
      summarize_ensemble(objective, config.rng_seed, traces);
  if (traces_out != nullptr) *traces_out = std::move(traces);
  return summary;
}

std::vector<EffectiveRange> effective_range_report(
    std::span<const EnsembleSummary> summaries) {
  std::vector<EffectiveRange> out;
  for (const Statistic s : kAllStatistics) {
    const auto k = static_cast<std::size_t>(s);
    EffectiveRange range;
    range.statistic = s;
    bool seen = false;
    for (const auto& e : summaries) {
      if (e.objective.statistic != s) continue;
      seen = true;
      for (const auto& slice : e.slices) {
        if (slice.count[k] == 0) continue;
        const double m = slice.mean[k];
        if (e.objective.direction == Direction::kMinimise) {
          range.lower = range.lower ? std::min(*range.lower, m) : m;
        } else {
          range.upper = range.upper ? std::max(*range.upper, m) : m;
        }
      }
    }
    if (seen) out.push_back(range);
  }
  return out;
}

}  // namespace mobility
