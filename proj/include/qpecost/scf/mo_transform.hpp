#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"
#include "qpecost/integrals/engine.hpp"
#include "qpecost/scf/rhf.hpp"

namespace qpecost::scf {

/// AO integrals expressed over the MO coefficients of `scf`.
hamiltonian::MOHamiltonian transform_to_mo(const integrals::IntegralSet& ints, const ScfResult& scf);

/// Same, for an arbitrary (possibly rectangular) coefficient matrix.
hamiltonian::MOHamiltonian transform_to_mo(const integrals::IntegralSet& ints, const Matrix& coefficients,
                                           int n_electrons);

}  // namespace qpecost::scf
