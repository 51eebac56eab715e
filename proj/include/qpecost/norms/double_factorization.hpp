#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <vector>

namespace qpecost::norms {

/// One second-level factor: leaf = vectors * diag(weights) * vectors^T.
struct DFLeaf {
  Matrix vectors;  // N x N orthogonal
  Vector weights;  // leaf eigenvalues, sign kept
};

struct DFFactorization {
  int rank = 0;
  std::vector<DFLeaf> leaves;
  Matrix one_body_vectors;  // eigenvectors of h + V-contracted term
  Vector one_body_weights;
  double one_body_norm = 0.0;
  double two_body_norm = 0.0;
  /// Frobenius norm of V - V_approx; negative when not requested.
  double reconstruction_error = -1.0;
  /// Dense eigensolver (true) or pivoted-Cholesky compression (false).
  bool dense_route = true;

  double lambda() const { return one_body_norm + two_body_norm; }
};

struct DFOptions {
  bool compute_error = true;
  /// Use the dense N^2 x N^2 eigensolver up to this many orbitals.
  int dense_max_orbitals = 30;
  double cholesky_tolerance = 1e-12;
  /// Eigenvalues of M below -this abort the factorization.
  double negative_tolerance = 1e-8;
};

/// Eigenvalues and leaf vectors (as columns, vec(L^t) of length N^2) of the
/// first-level factorization, ordered by |eigenvalue| descending.
struct FirstLevel {
  Vector eigenvalues;
  Matrix leaves;
};

FirstLevel first_level(const EriTensor& v, int rank, const DFOptions& opts = {});

/// f_pq = T_pq + sum_r (pq|rr), the one-body operator left after moving the
/// two-body normal-ordering correction into the squared leaves.
Matrix df_one_body(const hamiltonian::MOHamiltonian& ham);

DFFactorization df_factorize(const hamiltonian::MOHamiltonian& ham, int rank, const DFOptions& opts = {});

/// Leaf-by-leaf rebuild of the approximate two-electron supermatrix.
Matrix reconstruct(const DFFactorization& df, int n_orb);

}  // namespace qpecost::norms
