#include "qpecost/correlation/semicanonical.hpp"

#include "qpecost/correlation/mp2.hpp"
#include "qpecost/correlation/natural_orbitals.hpp"

#include <algorithm>

namespace qpecost::correlation {

Matrix block_diagonalizer(const Matrix& fock, int n_occ, Vector* eigenvalues) {
  const Eigen::Index n = fock.rows();
  Matrix u = Matrix::Zero(n, n);
  Vector e(n);
  auto block = [&](Eigen::Index start, Eigen::Index size) {
    if (size == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> es(fock.block(start, start, size, size));
    if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "Fock block diagonalization failed");
    Matrix vecs = es.eigenvectors();
    fix_column_signs(vecs);
    u.block(start, start, size, size) = vecs;
    e.segment(start, size) = es.eigenvalues();
  };
  block(0, n_occ);
  block(n_occ, n - n_occ);
  if (eigenvalues) *eigenvalues = e;
  return u;
}

Semicanonical semicanonicalize(const hamiltonian::MOHamiltonian& ham, const Matrix& rotation) {
  const int n = ham.n_orb();
  const int o = ham.n_elec / 2;
  if (rotation.rows() != n || rotation.cols() != n)
    fail(ErrorKind::Input, "semicanonical rotation must be n_orb x n_orb");
  if (o > 0 && o < n &&
      std::max(rotation.topRightCorner(o, n - o).cwiseAbs().maxCoeff(),
               rotation.bottomLeftCorner(n - o, o).cwiseAbs().maxCoeff()) > 1e-12)
    fail(ErrorKind::Input, "rotation mixes occupied and virtual orbitals");
  const auto rotated = hamiltonian::rotate(ham, rotation);
  Semicanonical out;
  const Matrix u = block_diagonalizer(fock_matrix(rotated), o, &out.orbital_energies);
  out.ham = hamiltonian::rotate(rotated, u);
  out.rotation = rotation * u;
  return out;
}

}  // namespace qpecost::correlation
