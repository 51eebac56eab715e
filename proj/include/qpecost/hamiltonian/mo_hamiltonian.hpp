#pragma once

#include "qpecost/tensor.hpp"

#include <vector>

namespace qpecost::hamiltonian {

/// Spin-free electronic Hamiltonian in an orthonormal orbital basis:
/// E_core + sum h_pq E_pq + 1/2 sum (pq|rs) (E_pq E_rs - delta_qr E_ps).
struct MOHamiltonian {
  int n_elec = 0;
  double e_core = 0.0;
  Matrix h;
  EriTensor v;

  int n_orb() const { return static_cast<int>(h.rows()); }

  /// Throws if shapes disagree or symmetry is violated beyond tolerance.
  void validate(double tol = 1e-10) const;
};

/// T_pq = h_pq - 1/2 sum_r (pr|rq).
Matrix modified_one_body(const MOHamiltonian& ham);

/// Folds `frozen_occupied` into the core energy and one-body term and slices
/// out `dropped_virtual`. Both index sets refer to `ham`'s orbitals.
MOHamiltonian restrict_orbitals(const MOHamiltonian& ham, const std::vector<int>& frozen_occupied,
                                const std::vector<int>& dropped_virtual);

/// Rotates the orbital basis: new orbitals are the columns of `c` (n_orb x n_new).
MOHamiltonian rotate(const MOHamiltonian& ham, const Matrix& c);

/// Closed-shell determinant energy with the lowest n_elec/2 orbitals doubly occupied.
double reference_energy(const MOHamiltonian& ham);

}  // namespace qpecost::hamiltonian
