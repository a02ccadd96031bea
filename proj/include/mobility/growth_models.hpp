#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mobility/event_stream.hpp"

namespace mobility {

// The twelve attachment rules. The declaration order is canonical and is used
// for tie-breaking and output column order.
enum class ModelKind {
  kRandom = 0,
  kPreferentialAttachment,
  kPreferentialNeighbourAttachment,
  kEquality,
  kSumNeighbourDegree,
  kAverageNeighbourDegree,
  kInverseAverageNeighbourDegree,
  kCluster,
  kEigen,
  kFitness,
  kGamma,
  kGammaIndividual,
};

inline constexpr std::size_t kModelCount = 12;
inline constexpr std::array<ModelKind, kModelCount> kAllModels = {
    ModelKind::kRandom,
    ModelKind::kPreferentialAttachment,
    ModelKind::kPreferentialNeighbourAttachment,
    ModelKind::kEquality,
    ModelKind::kSumNeighbourDegree,
    ModelKind::kAverageNeighbourDegree,
    ModelKind::kInverseAverageNeighbourDegree,
    ModelKind::kCluster,
    ModelKind::kEigen,
    ModelKind::kFitness,
    ModelKind::kGamma,
    ModelKind::kGammaIndividual,
};

std::string_view model_name(ModelKind kind);
std::optional<ModelKind> find_model(std::string_view name);
constexpr std::size_t model_index(ModelKind kind) {
  return static_cast<std::size_t>(kind);
}
constexpr bool uses_fitness(ModelKind kind) {
  return kind == ModelKind::kFitness || kind == ModelKind::kGamma ||
         kind == ModelKind::kGammaIndividual;
}

// Which node GammaIndividual re-samples.
enum class ResampleTarget { kUniform, kLowestFitness };

struct ModelParams {
  double gamma_shape = 2.0;
  double gamma_scale = 1.0;
  // Gamma / GammaIndividual re-sample every this many iterations.
  std::size_t resample_interval = 100;
  ResampleTarget individual_target = ResampleTarget::kUniform;
  double eigen_tolerance = 1e-10;
  std::size_t eigen_max_iterations = 10000;
  // PreferentialNeighbourAttachment retries before the uniform fallback.
  std::size_t neighbour_retries = 100;
};

using Rng = std::mt19937_64;

inline constexpr std::size_t kLinksPerNode = 3;
inline constexpr std::size_t kKernelNodes = 4;

// One logged edge addition. Kernel edges carry iteration 0; the node added by
// growth iteration i logs its three edges with iteration i.
struct GrowthEvent {
  NodeId u = 0;
  NodeId v = 0;
  std::uint64_t iteration = 0;

  friend bool operator==(const GrowthEvent&, const GrowthEvent&) = default;
};

// A simple undirected graph grown by attaching one node with three links per
// iteration, plus the per-node caches the attachment rules read.
class GrowthState {
 public:
  // The complete graph on four nodes.
  static GrowthState kernel();
  // An arbitrary simple graph; its edges are logged under iteration 0.
  static GrowthState from_edges(std::size_t n_nodes,
                                std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return endpoints_.size() / 2; }
  // Growth iterations applied since the kernel.
  std::uint64_t iteration() const { return iteration_; }

  std::span<const NodeId> neighbours(NodeId n) const { return adjacency_[n]; }
  std::uint32_t degree(NodeId n) const {
    return static_cast<std::uint32_t>(adjacency_[n].size());
  }
  std::uint64_t neighbour_degree_sum(NodeId n) const {
    return neighbour_degree_sum_[n];
  }
  std::uint64_t triangles(NodeId n) const { return triangles_[n]; }
  bool has_edge(NodeId a, NodeId b) const;

  // Every edge endpoint; node n appears degree(n) times.
  std::span<const NodeId> endpoints() const { return endpoints_; }
  std::span<const GrowthEvent> events() const { return events_; }

  // Fitness values; entries exist for nodes [0, fitness().size()).
  std::span<const double> fitness() const { return fitness_; }
  // Draws Gamma fitness for every node that has none yet, in id order.
  void ensure_fitness(const ModelParams& params, Rng& rng);
  void set_fitness(NodeId n, double value) { fitness_.at(n) = value; }

  // Last eigenvector centrality, used to warm-start the next solve.
  std::span<const double> eigen_cache() const { return eigen_cache_; }
  void set_eigen_cache(std::vector<double> v) { eigen_cache_ = std::move(v); }

  // Adds a node linked to distinct existing `targets`, logs the edges under
  // the next iteration and returns the new id.
  NodeId add_node(std::span<const NodeId> targets);

 private:
  void add_edge(NodeId a, NodeId b);

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::uint64_t> neighbour_degree_sum_;
  std::vector<std::uint64_t> triangles_;
  std::vector<NodeId> endpoints_;
  std::vector<GrowthEvent> events_;
  std::vector<double> fitness_;
  std::vector<double> eigen_cache_;
  std::uint64_t iteration_ = 0;
};

// Kernel K4 grown by preferential attachment up to `n_seed` nodes.
// Throws ConfigError if n_seed < 4.
GrowthState init_seed(std::size_t n_seed, Rng& rng,
                      const ModelParams& params = {});

// Probability weights (unnormalised) each existing node receives a link with.
// Fitness models require fitness for every node (see ensure_fitness).
// Throws ComputationError if no weight is positive after fallbacks.
std::vector<double> attachment_weights(const GrowthState& state,
                                       ModelKind kind,
                                       const ModelParams& params = {});

// Local clustering coefficient 2T / (d (d - 1)); 0 for degree < 2.
std::vector<double> clustering_coefficients(const GrowthState& state);

struct EigenResult {
  std::vector<double> vector;  // unit L2 norm, non-negative
  double eigenvalue = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration on A + I, stopping when successive unit vectors differ by
// less than the tolerance in L2 norm. `start` (possibly shorter than the node
// count) seeds the iteration; a stalled run restarts once from a random
// vector drawn from `rng` when one is supplied.
EigenResult eigenvector_centrality(const GrowthState& state,
                                   const ModelParams& params = {},
                                   std::span<const double> start = {},
                                   Rng* rng = nullptr);

// Adds one node with three links chosen by `kind`.
void grow_step(GrowthState& state, ModelKind kind, const ModelParams& params,
               Rng& rng);

// Applies `n_nodes` growth steps and returns the events they logged.
std::vector<GrowthEvent> grow_slice(GrowthState& state, ModelKind kind,
                                    std::size_t n_nodes,
                                    const ModelParams& params, Rng& rng);

}  // namespace mobility
