#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mobility/taxonomy.hpp"

namespace mobility {

// Mean absolute pairwise difference over twice the mean, via the sorted-rank
// identity. Throws ComputationError for empty input or a zero mean, and
// std::invalid_argument for negative values.
double gini(std::span<const double> x);

using TaxonomyRow = std::array<Correlation, kStatisticCount>;
using Vector6 = std::array<double, kStatisticCount>;

struct PcaModel {
  Vector6 mean{};
  // Row i is the i-th principal axis (unit length), ordered by descending
  // eigenvalue. The largest-magnitude entry of each row is non-negative.
  std::array<Vector6, kStatisticCount> components{};
  Vector6 eigenvalues{};
  std::size_t rows_used = 0;
  std::size_t rows_excluded = 0;
};

// Principal axes of the sample covariance (n - 1 denominator) of rows with no
// degenerate entry. Throws ComputationError with fewer than 2 usable rows.
PcaModel pca_fit(std::span<const TaxonomyRow> rows);
PcaModel pca_fit(std::span<const Vector6> rows);

// Scores on the first two components; nullopt if any entry is degenerate.
std::optional<std::array<double, 2>> pca_project(const PcaModel& model,
                                                 const TaxonomyRow& row);
std::array<double, 2> pca_project(const PcaModel& model, const Vector6& row);
// Scores on all six components.
Vector6 pca_scores(const PcaModel& model, const Vector6& row);

using Point2 = std::array<double, 2>;

struct GroupEllipse {
  std::string label;
  Point2 mean{};
  std::array<std::array<double, 2>, 2> covariance{};
  // Semi-axis lengths at n_sigma standard deviations.
  double major_axis = 0.0;
  double minor_axis = 0.0;
  // Angle of the major axis from the x axis, radians in (-pi/2, pi/2].
  double angle = 0.0;
  double n_sigma = 0.0;
  double weight = 1.0;  // mixture weight
  bool degenerate = false;  // minor axis collapsed
};

// Single Gaussian fit: sample mean, sample covariance, n_sigma contour.
// Throws ComputationError with fewer than 3 points.
GroupEllipse fit_group_ellipse(std::span<const Point2> points, double n_sigma,
                               std::string label = {});

// Gaussian mixture with `components` ellipses fitted by EM. One component is
// exactly fit_group_ellipse.
std::vector<GroupEllipse> fit_gaussian_mixture(std::span<const Point2> points,
                                               std::size_t components,
                                               double n_sigma,
                                               std::uint64_t seed,
                                               std::string label = {});

}  // namespace mobility
