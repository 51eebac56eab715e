#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/molecule.hpp"
#include "qpecost/hamiltonian/mo_hamiltonian.hpp"
#include "qpecost/integrals/engine.hpp"
#include "qpecost/scf/rhf.hpp"

#include <random>
#include <string>

namespace testing {

using namespace qpecost;

inline std::string data_path(const std::string& rel) { return std::string(QPECOST_DATA_DIR) + "/" + rel; }
inline std::string fixture_path(const std::string& rel) { return std::string(QPECOST_TEST_DATA_DIR) + "/" + rel; }

chem::Molecule geometry(const std::string& name);
const chem::BasisSet& basis(const std::string& name);

struct System {
  integrals::IntegralSet ints;
  scf::ScfResult scf;
  hamiltonian::MOHamiltonian ham;
};

/// RHF + MO transform, memoized per (geometry, basis) for the process.
const System& system(const std::string& geometry, const std::string& basis);

/// Random orthogonal matrix from the QR of a Gaussian matrix.
Matrix random_orthogonal(int n, std::mt19937& rng);

/// Random Hamiltonian with 8-fold symmetric, positive semidefinite (pq|rs).
hamiltonian::MOHamiltonian random_hamiltonian(int n, int n_elec, std::mt19937& rng);

}  // namespace testing
