#pragma once

#include <cstddef>
#include <vector>

namespace mobility {

struct SymmetricEigen {
  // Descending.
  std::vector<double> values;
  // Column j of the row-major n x n matrix is the unit eigenvector of
  // values[j].
  std::vector<double> vectors;
  std::size_t sweeps = 0;
};

// Cyclic Jacobi rotations for a small dense symmetric matrix (row-major).
SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n);

}  // namespace mobility
