#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <algorithm>
#include <set>

namespace qpecost::hamiltonian {

void MOHamiltonian::validate(double tol) const {
  if (h.rows() != h.cols()) fail(ErrorKind::Input, "one-body tensor is not square");
  if (v.n() != n_orb()) fail(ErrorKind::Input, "one- and two-body tensors disagree on orbital count");
  if (n_elec < 0 || n_elec % 2 != 0 || n_elec / 2 > n_orb())
    fail(ErrorKind::Input, "electron count " + std::to_string(n_elec) + " is invalid for " +
                               std::to_string(n_orb()) + " orbitals");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    fail(ErrorKind::Input, "one-body tensor is not symmetric");
  if (n_orb() > 0 && v.max_asymmetry() > tol) fail(ErrorKind::Input, "two-body tensor lacks 8-fold symmetry");
}

Matrix modified_one_body(const MOHamiltonian& ham) {
  const int n = ham.n_orb();
  Matrix t = ham.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double sum = 0.0;
      for (int r = 0; r < n; ++r) sum += ham.v(p, r, r, q);
      t(p, q) -= 0.5 * sum;
    }
  return t;
}

MOHamiltonian restrict_orbitals(const MOHamiltonian& ham, const std::vector<int>& frozen_occupied,
                                const std::vector<int>& dropped_virtual) {
  const int n = ham.n_orb();
  const int n_occ = ham.n_elec / 2;
  std::set<int> frozen, dropped;
  for (int i : frozen_occupied) {
    if (i < 0 || i >= n) fail(ErrorKind::Input, "frozen orbital index " + std::to_string(i) + " out of range");
    if (i >= n_occ) fail(ErrorKind::Input, "frozen orbital " + std::to_string(i) + " is not occupied");
    if (!frozen.insert(i).second) fail(ErrorKind::Input, "frozen orbital " + std::to_string(i) + " listed twice");
  }
  for (int a : dropped_virtual) {
    if (a < 0 || a >= n) fail(ErrorKind::Input, "dropped orbital index " + std::to_string(a) + " out of range");
    if (frozen.count(a)) fail(ErrorKind::Input, "orbital " + std::to_string(a) + " is both frozen and dropped");
    if (a < n_occ) fail(ErrorKind::Input, "dropped orbital " + std::to_string(a) + " is occupied");
    if (!dropped.insert(a).second) fail(ErrorKind::Input, "dropped orbital " + std::to_string(a) + " listed twice");
  }
  if (frozen.empty() && dropped.empty()) return ham;

  std::vector<int> active;
  for (int p = 0; p < n; ++p)
    if (!frozen.count(p) && !dropped.count(p)) active.push_back(p);

  MOHamiltonian out;
  out.n_elec = ham.n_elec - 2 * static_cast<int>(frozen.size());
  out.e_core = ham.e_core;
  for (int i : frozen) {
    out.e_core += 2.0 * ham.h(i, i);
    for (int j : frozen) out.e_core += 2.0 * ham.v(i, i, j, j) - ham.v(i, j, j, i);
  }
  const int m = static_cast<int>(active.size());
  out.h.resize(m, m);
  out.v = EriTensor(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const int p = active[static_cast<std::size_t>(a)];
      const int q = active[static_cast<std::size_t>(b)];
      double value = ham.h(p, q);
      for (int i : frozen) value += 2.0 * ham.v(p, q, i, i) - ham.v(p, i, i, q);
      out.h(a, b) = value;
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          out.v(a, b, c, d) = ham.v(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)],
                                    active[static_cast<std::size_t>(c)], active[static_cast<std::size_t>(d)]);
  return out;
}

MOHamiltonian rotate(const MOHamiltonian& ham, const Matrix& c) {
  if (c.rows() != ham.n_orb()) fail(ErrorKind::Input, "rotation rows must equal the orbital count");
  MOHamiltonian out;
  out.n_elec = ham.n_elec;
  out.e_core = ham.e_core;
  out.h = c.transpose() * ham.h * c;
  out.h = 0.5 * (out.h + out.h.transpose()).eval();
  out.v = transform(ham.v, c);
  return out;
}

double reference_energy(const MOHamiltonian& ham) {
  const int n_occ = ham.n_elec / 2;
  double e = ham.e_core;
  for (int i = 0; i < n_occ; ++i) {
    e += 2.0 * ham.h(i, i);
    for (int j = 0; j < n_occ; ++j) e += 2.0 * ham.v(i, i, j, j) - ham.v(i, j, j, i);
  }
  return e;
}

}  // namespace qpecost::hamiltonian
