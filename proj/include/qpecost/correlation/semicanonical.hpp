#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

namespace qpecost::correlation {

struct Semicanonical {
  hamiltonian::MOHamiltonian ham;
  Vector orbital_energies;
  /// Total rotation from the input orbitals (n_orb x n_orb).
  Matrix rotation;
};

/// Applies the block rotation (occupied and virtual blocks only), then
/// diagonalizes the Fock matrix separately inside each block.
Semicanonical semicanonicalize(const hamiltonian::MOHamiltonian& ham, const Matrix& rotation);

/// Rotation that diagonalizes `fock` within the occupied (first n_occ) and
/// virtual blocks; eigenvalues ascending per block.
Matrix block_diagonalizer(const Matrix& fock, int n_occ, Vector* eigenvalues = nullptr);

}  // namespace qpecost::correlation
