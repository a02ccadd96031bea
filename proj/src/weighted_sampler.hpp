#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace mobility::detail {

// Fenwick tree over non-negative weights supporting O(log n) updates, appends
// and proportional draws.
class WeightedSampler {
 public:
  void assign(std::span<const double> weights);
  void push_back(double w);
  void set(std::size_t i, double w);

  std::size_t size() const { return raw_.size(); }
  double weight(std::size_t i) const { return raw_[i]; }
  double total() const { return prefix(raw_.size()); }
  std::size_t positive_count() const { return positive_; }

  // Smallest index whose inclusive prefix sum exceeds u.
  std::size_t find(double u) const;

  // Draws `k` distinct indices, each proportional to weight among the indices
  // not yet drawn. Once no positive weight remains the rest are uniform over
  // the unused indices. Requires k <= size().
  template <typename Rng>
  void sample_distinct(std::size_t k, Rng& rng, std::vector<std::size_t>& out);

 private:
  double prefix(std::size_t count) const;
  static std::size_t lowbit(std::size_t i) { return i & (~i + 1); }

  std::vector<double> raw_;
  std::vector<double> tree_{0.0};  // 1-based
  std::size_t positive_ = 0;
};

inline void WeightedSampler::assign(std::span<const double> weights) {
  raw_.assign(weights.begin(), weights.end());
  tree_.assign(raw_.size() + 1, 0.0);
  positive_ = 0;
  for (std::size_t i = 1; i <= raw_.size(); ++i) {
    tree_[i] += raw_[i - 1];
    if (raw_[i - 1] > 0.0) ++positive_;
    const std::size_t parent = i + lowbit(i);
    if (parent <= raw_.size()) tree_[parent] += tree_[i];
  }
}

inline void WeightedSampler::push_back(double w) {
  const std::size_t i = raw_.size() + 1;
  // Node i covers (i - lowbit(i), i].
  tree_.push_back(w + prefix(i - 1) - prefix(i - lowbit(i)));
  raw_.push_back(w);
  if (w > 0.0) ++positive_;
}

inline void WeightedSampler::set(std::size_t i, double w) {
  const double delta = w - raw_[i];
  if (raw_[i] > 0.0) --positive_;
  if (w > 0.0) ++positive_;
  raw_[i] = w;
  if (delta == 0.0) return;
  for (std::size_t j = i + 1; j < tree_.size(); j += lowbit(j)) {
    tree_[j] += delta;
  }
}

inline double WeightedSampler::prefix(std::size_t count) const {
  double s = 0.0;
  for (std::size_t j = count; j > 0; j -= lowbit(j)) s += tree_[j];
  return s;
}

inline std::size_t WeightedSampler::find(double u) const {
  const std::size_t n = raw_.size();
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 <= n) step *= 2;
  for (; step > 0; step /= 2) {
    if (pos + step <= n && tree_[pos + step] <= u) {
      pos += step;
      u -= tree_[pos];
    }
  }
  return pos < n ? pos : n - 1;
}

template <typename Rng>
void WeightedSampler::sample_distinct(std::size_t k, Rng& rng,
                                      std::vector<std::size_t>& out) {
  out.clear();
  std::vector<double> saved;
  saved.reserve(k);
  auto unused = [&](std::size_t i) {
    for (const std::size_t c : out) {
      if (c == i) return false;
    }
    return true;
  };
  for (std::size_t draw = 0; draw < k; ++draw) {
    std::size_t pick = raw_.size();
    const double t = positive_ > 0 ? total() : 0.0;
    if (t > 0.0) {
      std::uniform_real_distribution<double> uni(0.0, t);
      for (int attempt = 0; attempt < 16 && pick == raw_.size(); ++attempt) {
        const std::size_t i = find(uni(rng));
        if (raw_[i] > 0.0) pick = i;
      }
      if (pick == raw_.size()) {
        // Rounding kept landing on zero-weight slots; take the heaviest.
        double best = 0.0;
        for (std::size_t i = 0; i < raw_.size(); ++i) {
          if (raw_[i] > best) {
            best = raw_[i];
            pick = i;
          }
        }
      }
    }
    if (pick == raw_.size()) {
      std::uniform_int_distribution<std::size_t> uni(0, raw_.size() - 1);
      do {
        pick = uni(rng);
      } while (!unused(pick));
    }
    out.push_back(pick);
    saved.push_back(raw_[pick]);
    set(pick, 0.0);
  }
  for (std::size_t d = 0; d < out.size(); ++d) set(out[d], saved[d]);
}

}  // namespace mobility::detail
