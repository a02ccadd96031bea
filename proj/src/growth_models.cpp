#include "mobility/growth_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mobility/errors.hpp"
#include "weighted_sampler.hpp"

namespace mobility {

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandom:
      return "random";
    case ModelKind::kPreferentialAttachment:
      return "preferential_attachment";
    case ModelKind::kPreferentialNeighbourAttachment:
      return "preferential_neighbour_attachment";
    case ModelKind::kEquality:
      return "equality";
    case ModelKind::kSumNeighbourDegree:
      return "sum_neighbour_degree";
    case ModelKind::kAverageNeighbourDegree:
      return "average_neighbour_degree";
    case ModelKind::kInverseAverageNeighbourDegree:
      return "inverse_average_neighbour_degree";
    case ModelKind::kCluster:
      return "cluster";
    case ModelKind::kEigen:
      return "eigen";
    case ModelKind::kFitness:
      return "fitness";
    case ModelKind::kGamma:
      return "gamma";
    case ModelKind::kGammaIndividual:
      return "gamma_individual";
  }
  return "random";
}

std::optional<ModelKind> find_model(std::string_view name) {
  for (const ModelKind k : kAllModels) {
    if (model_name(k) == name) return k;
  }
  return std::nullopt;
}

GrowthState GrowthState::kernel() {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId a = 0; a < kKernelNodes; ++a) {
    for (NodeId b = a + 1; b < kKernelNodes; ++b) edges.emplace_back(a, b);
  }
  return from_edges(kKernelNodes, edges);
}

GrowthState GrowthState::from_edges(
    std::size_t n_nodes, std::span<const std::pair<NodeId, NodeId>> edges) {
  GrowthState s;
  s.adjacency_.resize(n_nodes);
  s.neighbour_degree_sum_.assign(n_nodes, 0);
  s.triangles_.assign(n_nodes, 0);
  for (const auto& [a, b] : edges) {
    if (a >= n_nodes || b >= n_nodes || a == b || s.has_edge(a, b)) {
      throw std::invalid_argument("edge list is not a simple graph on the given nodes");
    }
    s.add_edge(std::min(a, b), std::max(a, b));
    s.events_.push_back({std::min(a, b), std::max(a, b), 0});
  }
  return s;
}

bool GrowthState::has_edge(NodeId a, NodeId b) const {
  const auto& small =
      adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  const NodeId other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
  return std::find(small.begin(), small.end(), other) != small.end();
}

void GrowthState::add_edge(NodeId a, NodeId b) {
  // Every common neighbour closes one new triangle.
  const auto& small =
      adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  const NodeId other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
  for (const NodeId w : small) {
    if (has_edge(w, other)) {
      ++triangles_[w];
      ++triangles_[a];
      ++triangles_[b];
    }
  }
  for (const NodeId m : adjacency_[a]) ++neighbour_degree_sum_[m];
  for (const NodeId m : adjacency_[b]) ++neighbour_degree_sum_[m];
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
  neighbour_degree_sum_[a] += adjacency_[b].size();
  neighbour_degree_sum_[b] += adjacency_[a].size();
  endpoints_.push_back(a);
  endpoints_.push_back(b);
}

NodeId GrowthState::add_node(std::span<const NodeId> targets) {
  const auto x = static_cast<NodeId>(adjacency_.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= x) throw std::invalid_argument("target does not exist");
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw std::invalid_argument("duplicate attachment target");
      }
    }
  }
  adjacency_.emplace_back();
  neighbour_degree_sum_.push_back(0);
  triangles_.push_back(0);
  ++iteration_;
  for (const NodeId t : targets) {
    add_edge(x, t);
    events_.push_back({t, x, iteration_});
  }
  return x;
}

void GrowthState::ensure_fitness(const ModelParams& params, Rng& rng) {
  std::gamma_distribution<double> gamma(params.gamma_shape, params.gamma_scale);
  while (fitness_.size() < adjacency_.size()) fitness_.push_back(gamma(rng));
}

std::vector<double> clustering_coefficients(const GrowthState& state) {
  std::vector<double> c(state.node_count(), 0.0);
  for (NodeId n = 0; n < state.node_count(); ++n) {
    const double d = state.degree(n);
    if (d >= 2) {
      c[n] = 2.0 * static_cast<double>(state.triangles(n)) / (d * (d - 1.0));
    }
  }
  return c;
}

EigenResult eigenvector_centrality(const GrowthState& state,
                                   const ModelParams& params,
                                   std::span<const double> start, Rng* rng) {
  const std::size_t n = state.node_count();
  EigenResult res;
  if (n == 0) return res;
  std::vector<double> x(n, 0.0);
  const std::size_t known = std::min(start.size(), n);
  std::copy_n(start.begin(), known, x.begin());
  if (std::all_of(x.begin(), x.begin() + known,
                  [](double v) { return v <= 0.0; })) {
    std::fill(x.begin(), x.end(), 1.0);
  } else {
    // Nodes added since the warm start solve their own row of the eigen
    // equation against the known entries: x_i = sum of neighbours / lambda,
    // with lambda the Rayleigh quotient of A at the warm start.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < known; ++i) {
      double acc = 0.0;
      for (const NodeId m : state.neighbours(static_cast<NodeId>(i))) {
        if (m < known) acc += x[m];
      }
      num += x[i] * acc;
      den += x[i] * x[i];
    }
    const double lambda = num > 0.0 ? num / den : 1.0;
    for (std::size_t i = known; i < n; ++i) {
      double sum = 0.0;
      for (const NodeId m : state.neighbours(static_cast<NodeId>(i))) {
        if (m < i) sum += x[m];
      }
      x[i] = sum / lambda;
    }
  }
  auto normalise = [](std::vector<double>& v) {
    double s = 0.0;
    for (const double e : v) s += e * e;
    const double norm = std::sqrt(s);
    for (double& e : v) e /= norm;
  };
  normalise(x);

  // Flat copy of the adjacency for the sweeps below.
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i + 1] = offsets[i] + state.degree(static_cast<NodeId>(i));
  }
  std::vector<NodeId> flat(offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = state.neighbours(static_cast<NodeId>(i));
    std::copy(nb.begin(), nb.end(), flat.begin() + static_cast<std::ptrdiff_t>(offsets[i]));
  }

  std::vector<double> y(n);
  auto iterate = [&](std::vector<double>& v) {
    for (std::size_t it = 1; it <= params.eigen_max_iterations; ++it) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = v[i];
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) acc += v[flat[k]];
        y[i] = acc;
        s += acc * acc;
      }
      const double inv = 1.0 / std::sqrt(s);
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double next = y[i] * inv;
        const double d = next - v[i];
        diff += d * d;
        v[i] = next;
      }
      ++res.iterations;
      if (std::sqrt(diff) < params.eigen_tolerance) return true;
    }
    return false;
  };
  res.converged = iterate(x);
  if (!res.converged && rng != nullptr) {
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    for (double& e : x) e = uni(*rng);
    normalise(x);
    res.converged = iterate(x);
  }
  // Rayleigh quotient of A at the final iterate.
  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const NodeId m : state.neighbours(static_cast<NodeId>(i))) acc += x[m];
    lambda += x[i] * acc;
  }
  res.eigenvalue = lambda;
  res.vector = std::move(x);
  return res;
}

namespace {

// Probability that one preferential-neighbour draw lands on each node: pick a
// by degree, then its neighbour b by degree within N(a).
std::vector<double> neighbour_attachment_marginal(const GrowthState& state) {
  const std::size_t n = state.node_count();
  std::vector<double> w(n, 0.0);
  for (NodeId a = 0; a < n; ++a) {
    const double pick_a = state.degree(a);
    const double within = static_cast<double>(state.neighbour_degree_sum(a));
    if (within <= 0.0) continue;
    for (const NodeId b : state.neighbours(a)) {
      w[b] += pick_a * static_cast<double>(state.degree(b)) / within;
    }
  }
  return w;
}

// Weight of node n under the rules whose weights depend only on local caches.
double local_weight(const GrowthState& s, ModelKind kind, NodeId n) {
  const double d = s.degree(n);
  const auto sum = static_cast<double>(s.neighbour_degree_sum(n));
  switch (kind) {
    case ModelKind::kRandom:
      return 1.0;
    case ModelKind::kPreferentialAttachment:
      return d;
    case ModelKind::kEquality:
      return d > 0 ? 1.0 / d : 0.0;
    case ModelKind::kSumNeighbourDegree:
      return sum;
    case ModelKind::kAverageNeighbourDegree:
      return d > 0 ? sum / d : 0.0;
    case ModelKind::kInverseAverageNeighbourDegree:
      return sum > 0 ? d / sum : 0.0;
    case ModelKind::kCluster:
      return d >= 2 ? 2.0 * static_cast<double>(s.triangles(n)) / (d * (d - 1))
                    : 0.0;
    case ModelKind::kFitness:
    case ModelKind::kGamma:
    case ModelKind::kGammaIndividual:
      return s.fitness()[n];
    case ModelKind::kPreferentialNeighbourAttachment:
    case ModelKind::kEigen:
      break;
  }
  throw std::logic_error("weight is not local for this model");
}

void check_weights(const std::vector<double>& w, ModelKind kind) {
  bool positive = false;
  for (const double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ComputationError(std::string(model_name(kind)) +
                             ": invalid attachment weight");
    }
    positive = positive || v > 0.0;
  }
  if (!positive) {
    throw ComputationError(std::string(model_name(kind)) +
                           ": every attachment weight is zero");
  }
}

}  // namespace

std::vector<double> attachment_weights(const GrowthState& state,
                                       ModelKind kind,
                                       const ModelParams& params) {
  const std::size_t n = state.node_count();
  if (n < kLinksPerNode) {
    throw ComputationError("attachment needs at least three existing nodes");
  }
  std::vector<double> w;
  switch (kind) {
    case ModelKind::kPreferentialNeighbourAttachment:
      w = neighbour_attachment_marginal(state);
      break;
    case ModelKind::kEigen:
      w = eigenvector_centrality(state, params, state.eigen_cache()).vector;
      break;
    default:
      if (uses_fitness(kind) && state.fitness().size() < n) {
        throw ComputationError("fitness values missing for some nodes");
      }
      w.resize(n);
      for (NodeId i = 0; i < n; ++i) w[i] = local_weight(state, kind, i);
      break;
  }
  if (kind == ModelKind::kCluster &&
      std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    std::fill(w.begin(), w.end(), 1.0);
  }
  check_weights(w, kind);
  return w;
}

namespace {

// Runs consecutive growth steps of one model, keeping whatever sampling
// structure that model needs up to date between steps.
class Grower {
 public:
  Grower(GrowthState& state, ModelKind kind, const ModelParams& params,
         Rng& rng)
      : state_(state), kind_(kind), params_(params), rng_(rng) {
    if (state_.node_count() < kLinksPerNode) {
      throw ComputationError("growth needs at least three existing nodes");
    }
    if (uses_fitness(kind_)) state_.ensure_fitness(params_, rng_);
    if (uses_sampler()) {
      std::vector<double> w(state_.node_count());
      for (NodeId i = 0; i < w.size(); ++i) w[i] = local_weight(state_, kind_, i);
      sampler_.assign(w);
    }
  }

  void step() {
    resample_fitness_if_due();
    choose_targets();
    const NodeId x = state_.add_node(targets_);
    if (uses_fitness(kind_)) state_.ensure_fitness(params_, rng_);
    update_weights(x);
  }

 private:
  bool uses_sampler() const {
    switch (kind_) {
      case ModelKind::kRandom:
      case ModelKind::kPreferentialAttachment:
      case ModelKind::kPreferentialNeighbourAttachment:
      case ModelKind::kEigen:
        return false;
      default:
        return true;
    }
  }

  bool taken(NodeId n, std::size_t count) const {
    for (std::size_t i = 0; i < count; ++i) {
      if (targets_[i] == n) return true;
    }
    return false;
  }

  NodeId uniform_unused(std::size_t count) {
    std::uniform_int_distribution<std::size_t> uni(0, state_.node_count() - 1);
    NodeId n;
    do {
      n = static_cast<NodeId>(uni(rng_));
    } while (taken(n, count));
    return n;
  }

  NodeId preferential(std::size_t count) {
    const auto ends = state_.endpoints();
    std::uniform_int_distribution<std::size_t> uni(0, ends.size() - 1);
    NodeId n;
    do {
      n = ends[uni(rng_)];
    } while (taken(n, count));
    return n;
  }

  void choose_targets() {
    switch (kind_) {
      case ModelKind::kRandom:
        for (std::size_t i = 0; i < kLinksPerNode; ++i) {
          targets_[i] = uniform_unused(i);
        }
        return;
      case ModelKind::kPreferentialAttachment:
        for (std::size_t i = 0; i < kLinksPerNode; ++i) {
          targets_[i] = preferential(i);
        }
        return;
      case ModelKind::kPreferentialNeighbourAttachment:
        for (std::size_t i = 0; i < kLinksPerNode; ++i) {
          targets_[i] = neighbour_of_preferential(i);
        }
        return;
      case ModelKind::kEigen: {
        EigenResult eig = eigenvector_centrality(state_, params_,
                                                 state_.eigen_cache(), &rng_);
        sampler_.assign(eig.vector);
        state_.set_eigen_cache(std::move(eig.vector));
        break;
      }
      default:
        break;
    }
    sampler_.sample_distinct(kLinksPerNode, rng_, picks_);
    for (std::size_t i = 0; i < kLinksPerNode; ++i) {
      targets_[i] = static_cast<NodeId>(picks_[i]);
    }
  }

  NodeId neighbour_of_preferential(std::size_t count) {
    const auto ends = state_.endpoints();
    std::uniform_int_distribution<std::size_t> pick_end(0, ends.size() - 1);
    for (std::size_t attempt = 0; attempt < params_.neighbour_retries;
         ++attempt) {
      const NodeId a = ends[pick_end(rng_)];
      const auto nb = state_.neighbours(a);
      const auto total = static_cast<double>(state_.neighbour_degree_sum(a));
      std::uniform_real_distribution<double> uni(0.0, total);
      double u = uni(rng_);
      NodeId b = nb.back();
      for (const NodeId m : nb) {
        u -= state_.degree(m);
        if (u < 0.0) {
          b = m;
          break;
        }
      }
      if (!taken(b, count)) return b;
    }
    return uniform_unused(count);
  }

  void resample_fitness_if_due() {
    if (kind_ != ModelKind::kGamma && kind_ != ModelKind::kGammaIndividual) {
      return;
    }
    const std::size_t m = std::max<std::size_t>(1, params_.resample_interval);
    if ((state_.iteration() + 1) % m != 0) return;
    std::gamma_distribution<double> gamma(params_.gamma_shape,
                                          params_.gamma_scale);
    const std::size_t n = state_.node_count();
    if (kind_ == ModelKind::kGamma) {
      for (NodeId i = 0; i < n; ++i) state_.set_fitness(i, gamma(rng_));
      std::vector<double> w(state_.fitness().begin(), state_.fitness().end());
      sampler_.assign(w);
      return;
    }
    NodeId chosen = 0;
    if (params_.individual_target == ResampleTarget::kUniform) {
      std::uniform_int_distribution<std::size_t> uni(0, n - 1);
      chosen = static_cast<NodeId>(uni(rng_));
    } else {
      const auto f = state_.fitness();
      chosen = static_cast<NodeId>(std::min_element(f.begin(), f.end()) -
                                   f.begin());
    }
    state_.set_fitness(chosen, gamma(rng_));
    sampler_.set(chosen, state_.fitness()[chosen]);
  }

  void update_weights(NodeId x) {
    if (!uses_sampler()) return;
    sampler_.push_back(local_weight(state_, kind_, x));
    switch (kind_) {
      case ModelKind::kEquality:
      case ModelKind::kCluster:
        // Degrees changed for the targets; triangles only among x and them.
        for (const NodeId t : targets_) {
          sampler_.set(t, local_weight(state_, kind_, t));
        }
        break;
      case ModelKind::kSumNeighbourDegree:
      case ModelKind::kAverageNeighbourDegree:
      case ModelKind::kInverseAverageNeighbourDegree:
        // Neighbour sums changed for the targets and all their neighbours.
        for (const NodeId t : targets_) {
          sampler_.set(t, local_weight(state_, kind_, t));
          for (const NodeId m : state_.neighbours(t)) {
            sampler_.set(m, local_weight(state_, kind_, m));
          }
        }
        break;
      default:
        break;
    }
  }

  GrowthState& state_;
  ModelKind kind_;
  const ModelParams& params_;
  Rng& rng_;
  detail::WeightedSampler sampler_;
  std::array<NodeId, kLinksPerNode> targets_{};
  std::vector<std::size_t> picks_;
};

}  // namespace

GrowthState init_seed(std::size_t n_seed, Rng& rng, const ModelParams& params) {
  if (n_seed < kKernelNodes) {
    throw ConfigError("seed network needs at least " +
                      std::to_string(kKernelNodes) + " nodes");
  }
  GrowthState state = GrowthState::kernel();
  grow_slice(state, ModelKind::kPreferentialAttachment, n_seed - kKernelNodes,
             params, rng);
  return state;
}

void grow_step(GrowthState& state, ModelKind kind, const ModelParams& params,
               Rng& rng) {
  Grower(state, kind, params, rng).step();
}

std::vector<GrowthEvent> grow_slice(GrowthState& state, ModelKind kind,
                                    std::size_t n_nodes,
                                    const ModelParams& params, Rng& rng) {
  const std::size_t first = state.events().size();
  if (n_nodes > 0) {
    Grower grower(state, kind, params, rng);
    for (std::size_t i = 0; i < n_nodes; ++i) grower.step();
  }
  const auto ev = state.events();
  return {ev.begin() + static_cast<std::ptrdiff_t>(first), ev.end()};
}

}  // namespace mobility
