#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/parameters.hpp"

#include <string>
#include <vector>

namespace qpecost::basisopt {

/// Merges the base shell(s) of one angular momentum into one generally
/// contracted shell over the donor exponents. Each base exponent replaces
/// the nearest still-unreplaced donor exponent (log distance) and each base
/// contraction column keeps its coefficients on those replaced rows, zero
/// elsewhere, so the initial functions equal the base functions.
chem::BasisShell augmented_shell(const std::vector<chem::BasisShell>& base, const chem::BasisShell& donor);

struct AugmentedBasis {
  chem::BasisSet basis;
  chem::ParameterVector parameters;  // every exponent and coefficient of the new shell
  int shell = 0;                     // index of the augmented shell inside the element's list
  std::vector<double> replaced;      // donor exponents that were swapped out
};

/// Replaces the l-shells of `element` in `base` by their augmentation from
/// the first l-shell of `element` in `donor`.
AugmentedBasis init_augmented(const chem::BasisSet& base, const chem::BasisSet& donor, const std::string& element,
                              int l);

}  // namespace qpecost::basisopt
