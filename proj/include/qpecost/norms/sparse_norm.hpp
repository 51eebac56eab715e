#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

namespace qpecost::norms {

/// Pauli 1-norm of the Jordan-Wigner Hamiltonian split into the identity
/// coefficient (constant), one-body and two-body parts.
struct NormReport {
  int n_orb = 0;
  double constant = 0.0;
  double one_body = 0.0;
  double two_body = 0.0;

  double total() const { return constant + one_body + two_body; }
  /// Norm that sets the QPE cost; the identity term is a global phase.
  double effective() const { return one_body + two_body; }
};

/// Closed-form evaluation from the integrals. The identity coefficient
/// includes `ham.e_core`.
NormReport sparse_norm(const hamiltonian::MOHamiltonian& ham);

}  // namespace qpecost::norms
