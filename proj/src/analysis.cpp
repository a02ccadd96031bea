#include "mobility/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mobility/errors.hpp"
#include "mobility/jacobi.hpp"

namespace mobility {

double gini(std::span<const double> x) {
  if (x.empty()) throw ComputationError("gini of an empty sample");
  std::vector<double> v(x.begin(), x.end());
  for (const double e : v) {
    if (!(e >= 0.0)) throw std::invalid_argument("gini needs non-negative values");
  }
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += v[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * v[i];
  }
  if (total == 0.0) throw ComputationError("gini of an all-zero sample");
  return weighted / (n * total);
}

PcaModel pca_fit(std::span<const Vector6> rows) {
  constexpr std::size_t d = kStatisticCount;
  if (rows.size() < 2) {
    throw ComputationError("PCA needs at least 2 complete rows");
  }
  PcaModel model;
  model.rows_used = rows.size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) model.mean[i] += r[i];
  }
  for (auto& m : model.mean) m /= static_cast<double>(rows.size());

  std::vector<double> cov(d * d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        cov[i * d + j] += (r[i] - model.mean[i]) * (r[j] - model.mean[j]);
      }
    }
  }
  const auto denom = static_cast<double>(rows.size() - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= denom;
      cov[j * d + i] = cov[i * d + j];
    }
  }

  const SymmetricEigen eig = jacobi_eigen(std::move(cov), d);
  for (std::size_t c = 0; c < d; ++c) {
    model.eigenvalues[c] = eig.values[c];
    Vector6& axis = model.components[c];
    std::size_t big = 0;
    for (std::size_t k = 0; k < d; ++k) {
      axis[k] = eig.vectors[k * d + c];
      if (std::abs(axis[k]) > std::abs(axis[big])) big = k;
    }
    if (axis[big] < 0) {
      for (auto& a : axis) a = -a;
    }
  }
  return model;
}

PcaModel pca_fit(std::span<const TaxonomyRow> rows) {
  std::vector<Vector6> complete;
  complete.reserve(rows.size());
  std::size_t excluded = 0;
  for (const auto& r : rows) {
    Vector6 v{};
    bool ok = true;
    for (std::size_t i = 0; i < kStatisticCount && ok; ++i) {
      if (r[i]) {
        v[i] = *r[i];
      } else {
        ok = false;
      }
    }
    if (ok) {
      complete.push_back(v);
    } else {
      ++excluded;
    }
  }
  PcaModel model = pca_fit(std::span<const Vector6>(complete));
  model.rows_excluded = excluded;
  return model;
}

Vector6 pca_scores(const PcaModel& model, const Vector6& row) {
  Vector6 out{};
  for (std::size_t c = 0; c < kStatisticCount; ++c) {
    for (std::size_t k = 0; k < kStatisticCount; ++k) {
      out[c] += model.components[c][k] * (row[k] - model.mean[k]);
    }
  }
  return out;
}

std::array<double, 2> pca_project(const PcaModel& model, const Vector6& row) {
  const Vector6 s = pca_scores(model, row);
  return {s[0], s[1]};
}

std::optional<std::array<double, 2>> pca_project(const PcaModel& model,
                                                 const TaxonomyRow& row) {
  Vector6 v{};
  for (std::size_t i = 0; i < kStatisticCount; ++i) {
    if (!row[i]) return std::nullopt;
    v[i] = *row[i];
  }
  return pca_project(model, v);
}

namespace {

using Cov2 = std::array<std::array<double, 2>, 2>;

GroupEllipse ellipse_from(const Point2& mean, const Cov2& cov, double n_sigma,
                          std::string label) {
  GroupEllipse e;
  e.label = std::move(label);
  e.mean = mean;
  e.covariance = cov;
  e.n_sigma = n_sigma;
  const double a = cov[0][0];
  const double b = cov[0][1];
  const double d = cov[1][1];
  const double half_trace = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  const double l1 = half_trace + radius;
  const double l2 = std::max(half_trace - radius, 0.0);
  e.major_axis = n_sigma * std::sqrt(std::max(l1, 0.0));
  e.minor_axis = n_sigma * std::sqrt(l2);
  e.angle = (radius == 0.0) ? 0.0 : 0.5 * std::atan2(2.0 * b, a - d);
  if (e.angle <= -std::numbers::pi / 2) e.angle += std::numbers::pi;
  e.degenerate = !(l2 > 1e-12 * std::max(l1, 1e-300));
  return e;
}

}  // namespace

GroupEllipse fit_group_ellipse(std::span<const Point2> points, double n_sigma,
                               std::string label) {
  if (points.size() < 3) {
    throw ComputationError("an ellipse needs at least 3 points");
  }
  if (!(n_sigma > 0.0)) throw std::invalid_argument("n_sigma must be positive");
  const auto n = static_cast<double>(points.size());
  Point2 mean{};
  for (const auto& p : points) {
    mean[0] += p[0];
    mean[1] += p[1];
  }
  mean[0] /= n;
  mean[1] /= n;
  Cov2 cov{};
  for (const auto& p : points) {
    const double dx = p[0] - mean[0];
    const double dy = p[1] - mean[1];
    cov[0][0] += dx * dx;
    cov[0][1] += dx * dy;
    cov[1][1] += dy * dy;
  }
  cov[0][0] /= n - 1;
  cov[0][1] /= n - 1;
  cov[1][1] /= n - 1;
  cov[1][0] = cov[0][1];
  return ellipse_from(mean, cov, n_sigma, std::move(label));
}

std::vector<GroupEllipse> fit_gaussian_mixture(std::span<const Point2> points,
                                               std::size_t components,
                                               double n_sigma,
                                               std::uint64_t seed,
                                               std::string label) {
  if (components == 0) throw std::invalid_argument("need at least one component");
  if (components == 1) return {fit_group_ellipse(points, n_sigma, label)};
  const std::size_t n = points.size();
  if (n < 3 * components) {
    throw ComputationError("too few points for " + std::to_string(components) +
                           " mixture components");
  }
  const std::size_t k = components;
  constexpr double kRidge = 1e-9;

  // k-means++ style initial centres.
  std::mt19937_64 rng(seed);
  std::vector<Point2> mu;
  mu.push_back(points[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  std::vector<double> dist(n);
  while (mu.size() < k) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = INFINITY;
      for (const auto& m : mu) {
        best = std::min(best, std::pow(points[i][0] - m[0], 2) +
                                  std::pow(points[i][1] - m[1], 2));
      }
      dist[i] = best;
    }
    std::discrete_distribution<std::size_t> pick(dist.begin(), dist.end());
    mu.push_back(points[pick(rng)]);
  }
  const GroupEllipse all = fit_group_ellipse(points, 1.0);
  std::vector<Cov2> sigma(k, all.covariance);
  std::vector<double> weight(k, 1.0 / static_cast<double>(k));
  std::vector<double> resp(n * k);

  double previous = -INFINITY;
  for (int iter = 0; iter < 500; ++iter) {
    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row_max = -INFINITY;
      for (std::size_t c = 0; c < k; ++c) {
        const Cov2& s = sigma[c];
        const double det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        const double dx = points[i][0] - mu[c][0];
        const double dy = points[i][1] - mu[c][1];
        const double q =
            (s[1][1] * dx * dx - 2.0 * s[0][1] * dx * dy + s[0][0] * dy * dy) /
            det;
        resp[i * k + c] = std::log(weight[c]) - 0.5 * q -
                          0.5 * std::log(det) - std::log(2 * std::numbers::pi);
        row_max = std::max(row_max, resp[i * k + c]);
      }
      double sum = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        resp[i * k + c] = std::exp(resp[i * k + c] - row_max);
        sum += resp[i * k + c];
      }
      for (std::size_t c = 0; c < k; ++c) resp[i * k + c] /= sum;
      loglik += row_max + std::log(sum);
    }
    for (std::size_t c = 0; c < k; ++c) {
      double nk = 0.0;
      Point2 m{};
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i * k + c];
        m[0] += resp[i * k + c] * points[i][0];
        m[1] += resp[i * k + c] * points[i][1];
      }
      nk = std::max(nk, 1e-12);
      m[0] /= nk;
      m[1] /= nk;
      Cov2 s{};
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = points[i][0] - m[0];
        const double dy = points[i][1] - m[1];
        s[0][0] += resp[i * k + c] * dx * dx;
        s[0][1] += resp[i * k + c] * dx * dy;
        s[1][1] += resp[i * k + c] * dy * dy;
      }
      s[0][0] = s[0][0] / nk + kRidge;
      s[0][1] /= nk;
      s[1][1] = s[1][1] / nk + kRidge;
      s[1][0] = s[0][1];
      mu[c] = m;
      sigma[c] = s;
      weight[c] = nk / static_cast<double>(n);
    }
    if (std::abs(loglik - previous) < 1e-10 * std::max(1.0, std::abs(loglik))) {
      break;
    }
    previous = loglik;
  }

  std::vector<std::size_t> order(k);
  for (std::size_t c = 0; c < k; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return weight[a] != weight[b] ? weight[a] > weight[b] : a < b;
  });
  std::vector<GroupEllipse> out;
  for (const std::size_t c : order) {
    GroupEllipse e = ellipse_from(mu[c], sigma[c], n_sigma, label);
    e.weight = weight[c];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mobility
