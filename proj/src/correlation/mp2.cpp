#include "qpecost/correlation/mp2.hpp"

#include <cmath>

namespace qpecost::correlation {

Matrix fock_matrix(const hamiltonian::MOHamiltonian& ham) {
  const int n = ham.n_orb();
  const int n_occ = ham.n_elec / 2;
  Matrix f = ham.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      double sum = 0.0;
      for (int i = 0; i < n_occ; ++i) sum += 2.0 * ham.v(p, q, i, i) - ham.v(p, i, i, q);
      f(p, q) += sum;
      if (q != p) f(q, p) = f(p, q);
    }
  return f;
}

MP2Result run_mp2(const hamiltonian::MOHamiltonian& ham, const Vector& orbital_energies, double min_gap) {
  const int n = ham.n_orb();
  if (orbital_energies.size() != n) fail(ErrorKind::Input, "MP2 needs one orbital energy per orbital");
  MP2Result out;
  out.n_occ = ham.n_elec / 2;
  out.n_virt = n - out.n_occ;
  const int o = out.n_occ;
  const int v = out.n_virt;
  out.virtual_density = Matrix::Zero(v, v);
  if (o == 0 || v == 0) return out;
  const Vector& e = orbital_energies;
  const double gap = e.tail(v).minCoeff() - e.head(o).maxCoeff();
  if (gap <= min_gap)
    fail(ErrorKind::Numerical, "MP2 denominators vanish: HOMO-LUMO gap " + std::to_string(gap) + " Ha");

  out.amplitudes.assign(static_cast<std::size_t>(o) * o * v * v, 0.0);
  double energy = 0.0;
  Matrix t(v, v), x(v, v);
  for (int i = 0; i < o; ++i)
    for (int j = 0; j < o; ++j) {
      for (int a = 0; a < v; ++a)
        for (int b = 0; b < v; ++b) {
          const double iajb = ham.v(i, o + a, j, o + b);
          const double ibja = ham.v(i, o + b, j, o + a);
          const double amp = iajb / (e(i) + e(j) - e(o + a) - e(o + b));
          t(a, b) = amp;
          out.amplitudes[static_cast<std::size_t>(((i * o + j) * v + a) * v + b)] = amp;
          energy += amp * (2.0 * iajb - ibja);
        }
      // D_ab += 2 sum_c t_ij^ac (2 t_ij^bc - t_ij^cb)
      x = 2.0 * t - t.transpose();
      out.virtual_density.noalias() += 2.0 * t * x.transpose();
    }
  out.correlation_energy = energy;
  out.virtual_density = 0.5 * (out.virtual_density + out.virtual_density.transpose()).eval();
  return out;
}

}  // namespace qpecost::correlation
