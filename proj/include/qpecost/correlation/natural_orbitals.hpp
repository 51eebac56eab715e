#pragma once

#include "qpecost/correlation/mp2.hpp"

#include <optional>
#include <string>

namespace qpecost::correlation {

struct NaturalOrbitalSet {
  /// Columns are natural orbitals expressed over the canonical virtuals.
  Matrix rotation;
  /// Natural occupation numbers, descending.
  Vector occupations;
  std::string source_basis;
  std::optional<double> threshold;
};

/// Eigendecomposition of a symmetric virtual density, occupations
/// descending (ties by ascending index), eigenvector signs fixed so the
/// largest-magnitude component is positive.
NaturalOrbitalSet natural_orbitals(const Matrix& virtual_density, std::string source_basis = {});
NaturalOrbitalSet natural_orbitals(const MP2Result& mp2, std::string source_basis = {});

/// Makes the largest-magnitude entry of every column positive.
void fix_column_signs(Matrix& m);

}  // namespace qpecost::correlation
