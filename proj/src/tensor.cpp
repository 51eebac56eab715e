#include "qpecost/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qpecost {

EriTensor::EriTensor(int n, Matrix supermatrix) : n_(n), m_(std::move(supermatrix)) {
  if (m_.rows() != Eigen::Index(n) * n || m_.cols() != m_.rows())
    fail(ErrorKind::Input, "ERI supermatrix has wrong shape");
}

void EriTensor::set_symmetric(int p, int q, int r, int s, double value) {
  auto& t = *this;
  t(p, q, r, s) = value;
  t(q, p, r, s) = value;
  t(p, q, s, r) = value;
  t(q, p, s, r) = value;
  t(r, s, p, q) = value;
  t(s, r, p, q) = value;
  t(r, s, q, p) = value;
  t(s, r, q, p) = value;
}

double EriTensor::max_asymmetry() const {
  double worst = 0.0;
  const auto& t = *this;
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) {
          const double v = t(p, q, r, s);
          worst = std::max({worst, std::abs(v - t(q, p, r, s)), std::abs(v - t(p, q, s, r)),
                            std::abs(v - t(r, s, p, q))});
        }
  return worst;
}

namespace {

// For every column (fixed ket pair) reshape the bra pair index into an
// n x n block X(q, p) and replace it with C^T X C. Input rows: n_old^2,
// output rows: n_new^2. The caller transposes between the two halves.
Matrix half_transform(const Matrix& in, int n_old, const Matrix& c) {
  const int n_new = static_cast<int>(c.cols());
  Matrix out(Eigen::Index(n_new) * n_new, in.cols());
  Matrix tmp(n_old, n_new);
  for (Eigen::Index col = 0; col < in.cols(); ++col) {
    Eigen::Map<const Matrix> x(in.col(col).data(), n_old, n_old);
    tmp.noalias() = x * c;
    Eigen::Map<Matrix> y(out.col(col).data(), n_new, n_new);
    y.noalias() = c.transpose() * tmp;
  }
  return out;
}

}  // namespace

EriTensor transform(const EriTensor& eri, const Matrix& c) {
  if (c.rows() != eri.n()) fail(ErrorKind::Input, "transform: coefficient rows must equal tensor dimension");
  const int n_new = static_cast<int>(c.cols());
  Matrix first = half_transform(eri.matrix(), eri.n(), c);
  Matrix first_t = first.transpose();
  first.resize(0, 0);
  Matrix second = half_transform(first_t, eri.n(), c);
  // second holds (rs, pq); the result is symmetric under pair exchange, but
  // transpose anyway so no symmetry assumption leaks into the layout.
  return EriTensor(n_new, second.transpose());
}

}  // namespace qpecost
