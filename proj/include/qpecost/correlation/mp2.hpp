#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <vector>

namespace qpecost::correlation {

/// Closed-shell MP2 over canonical orbitals.
struct MP2Result {
  int n_occ = 0;
  int n_virt = 0;
  double correlation_energy = 0.0;
  /// t_ij^ab at ((i*n_occ + j)*n_virt + a)*n_virt + b.
  std::vector<double> amplitudes;
  /// Unrelaxed virtual-virtual one-particle density.
  Matrix virtual_density;

  double amplitude(int i, int j, int a, int b) const {
    return amplitudes[static_cast<std::size_t>(((i * n_occ + j) * n_virt + a) * n_virt + b)];
  }
};

/// `orbital_energies` must be the diagonal of the Fock matrix of `ham`.
MP2Result run_mp2(const hamiltonian::MOHamiltonian& ham, const Vector& orbital_energies,
                  double min_gap = 1e-6);

/// Closed-shell Fock matrix of `ham` with the lowest n_elec/2 orbitals occupied.
Matrix fock_matrix(const hamiltonian::MOHamiltonian& ham);

}  // namespace qpecost::correlation
