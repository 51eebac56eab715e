#include "qpecost/scf/mo_transform.hpp"

namespace qpecost::scf {

hamiltonian::MOHamiltonian transform_to_mo(const integrals::IntegralSet& ints, const Matrix& coefficients,
                                           int n_electrons) {
  if (coefficients.rows() != ints.n_ao)
    fail(ErrorKind::Input, "MO coefficients have " + std::to_string(coefficients.rows()) + " rows but the basis has " +
                               std::to_string(ints.n_ao) + " functions");
  hamiltonian::MOHamiltonian out;
  out.n_elec = n_electrons;
  out.e_core = ints.e_nuc;
  out.h = coefficients.transpose() * ints.core_hamiltonian() * coefficients;
  out.h = 0.5 * (out.h + out.h.transpose()).eval();
  out.v = transform(ints.eri, coefficients);
  return out;
}

hamiltonian::MOHamiltonian transform_to_mo(const integrals::IntegralSet& ints, const ScfResult& scf) {
  return transform_to_mo(ints, scf.coefficients, 2 * scf.n_occ);
}

}  // namespace qpecost::scf
