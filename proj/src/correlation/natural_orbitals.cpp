#include "qpecost/correlation/natural_orbitals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpecost::correlation {

void fix_column_signs(Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c)) + 1e-12) best = r;
    if (m.rows() > 0 && m(best, c) < 0.0) m.col(c) *= -1.0;
  }
}

NaturalOrbitalSet natural_orbitals(const Matrix& virtual_density, std::string source_basis) {
  NaturalOrbitalSet out;
  out.source_basis = std::move(source_basis);
  const Eigen::Index n = virtual_density.rows();
  out.rotation.resize(n, n);
  out.occupations.resize(n);
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (virtual_density + virtual_density.transpose()));
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "virtual density diagonalization failed");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Vector& w = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return w(a) > w(b); });
  for (Eigen::Index k = 0; k < n; ++k) {
    out.rotation.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    out.occupations(k) = w(order[static_cast<std::size_t>(k)]);
  }
  fix_column_signs(out.rotation);
  return out;
}

NaturalOrbitalSet natural_orbitals(const MP2Result& mp2, std::string source_basis) {
  return natural_orbitals(mp2.virtual_density, std::move(source_basis));
}

}  // namespace qpecost::correlation
