#pragma once

#include "qpecost/common.hpp"

namespace qpecost {

/// Real chemist-notation four-index tensor (pq|rs), stored as the n^2 x n^2
/// supermatrix M_{(pq),(rs)} with pair index p*n+q.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(int n) : n_(n), m_(Matrix::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n)) {}
  EriTensor(int n, Matrix supermatrix);

  int n() const { return n_; }
  Eigen::Index pair(int p, int q) const { return Eigen::Index(p) * n_ + q; }

  double operator()(int p, int q, int r, int s) const { return m_(pair(p, q), pair(r, s)); }
  double& operator()(int p, int q, int r, int s) { return m_(pair(p, q), pair(r, s)); }

  /// Writes all eight permutationally equivalent positions.
  void set_symmetric(int p, int q, int r, int s, double value);

  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }

  /// Largest deviation from 8-fold permutational symmetry.
  double max_asymmetry() const;

 private:
  int n_ = 0;
  Matrix m_;
};

/// Four-index transform (pq|rs) -> sum C_ap C_bq C_cr C_ds (ab|cd), via two
/// half-transforms. `c` is n_old x n_new.
EriTensor transform(const EriTensor& eri, const Matrix& c);

}  // namespace qpecost
