#include "qpecost/norms/sparse_norm.hpp"

#include <cmath>

namespace qpecost::norms {

NormReport sparse_norm(const hamiltonian::MOHamiltonian& ham) {
  const int n = ham.n_orb();
  const auto& v = ham.v;
  NormReport out;
  out.n_orb = n;

  double constant = ham.e_core;
  for (int p = 0; p < n; ++p) {
    constant += ham.h(p, p);
    for (int r = 0; r < n; ++r) constant += 0.5 * v(p, p, r, r) - 0.25 * v(p, r, r, p);
  }
  out.constant = std::abs(constant);

  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double f = ham.h(p, q);
      for (int r = 0; r < n; ++r) f += v(p, q, r, r) - 0.5 * v(p, r, r, q);
      out.one_body += std::abs(f);
    }

  double same_spin = 0.0;
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < p; ++r)
      for (int q = 0; q < n; ++q)
        for (int s = q + 1; s < n; ++s) same_spin += std::abs(v(p, q, r, s) - v(p, s, r, q));
  out.two_body = 0.5 * same_spin + 0.25 * v.matrix().cwiseAbs().sum();
  return out;
}

}  // namespace qpecost::norms
