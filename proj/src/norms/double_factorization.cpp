#include "qpecost/norms/double_factorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpecost::norms {

namespace {

std::vector<Eigen::Index> ranked(const Vector& eigenvalues) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(eigenvalues.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double la = eigenvalues(a), lb = eigenvalues(b);
    if (std::abs(la) != std::abs(lb)) return std::abs(la) > std::abs(lb);
    if (la != lb) return la > lb;
    return a < b;
  });
  return order;
}

// Pivoted Cholesky M ~ L L^T, stopping when the largest residual diagonal
// drops below `tol`.
Matrix pivoted_cholesky(const Matrix& m, double tol, double negative_tol) {
  const Eigen::Index dim = m.rows();
  Vector diag = m.diagonal();
  if (diag.size() > 0 && diag.minCoeff() < -negative_tol)
    fail(ErrorKind::Numerical, "two-electron supermatrix has a negative diagonal element");
  Matrix l(dim, std::min<Eigen::Index>(dim, 64));
  Eigen::Index k = 0;
  while (k < dim) {
    Eigen::Index piv = 0;
    const double dmax = diag.maxCoeff(&piv);
    if (dmax < tol) break;
    if (k == l.cols()) l.conservativeResize(dim, std::min<Eigen::Index>(dim, 2 * l.cols()));
    Vector col = m.col(piv);
    if (k > 0) col.noalias() -= l.leftCols(k) * l.row(piv).head(k).transpose();
    col /= std::sqrt(dmax);
    l.col(k) = col;
    diag -= col.cwiseAbs2();
    diag(piv) = 0.0;
    ++k;
  }
  if (diag.size() > 0 && diag.minCoeff() < -negative_tol)
    fail(ErrorKind::Numerical, "two-electron supermatrix is not positive semidefinite");
  return l.leftCols(k);
}

Matrix leaf_matrix(const Matrix& leaves, Eigen::Index t, int n) {
  Eigen::Map<const Matrix> a(leaves.col(t).data(), n, n);
  return 0.5 * (a + a.transpose());
}

}  // namespace

FirstLevel first_level(const EriTensor& v, int rank, const DFOptions& opts) {
  const int n = v.n();
  const Eigen::Index dim = Eigen::Index(n) * n;
  if (rank < 1 || rank > dim)
    fail(ErrorKind::Input, "factorization rank " + std::to_string(rank) + " must lie in [1, " +
                               std::to_string(dim) + "]");
  FirstLevel out;
  out.eigenvalues = Vector::Zero(rank);
  out.leaves = Matrix::Zero(dim, rank);

  Vector eigenvalues;
  Matrix basis;  // columns map to leaves via leaf = basis * v_k (scaled below)
  bool dense = n <= opts.dense_max_orbitals;
  Matrix cholesky;
  if (dense) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(v.matrix());
    if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "first-level eigendecomposition failed");
    eigenvalues = es.eigenvalues();
    basis = es.eigenvectors();
  } else {
    cholesky = pivoted_cholesky(v.matrix(), opts.cholesky_tolerance, opts.negative_tolerance);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cholesky.transpose() * cholesky);
    if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "first-level eigendecomposition failed");
    eigenvalues = es.eigenvalues();
    basis = es.eigenvectors();
  }
  if (eigenvalues.size() > 0 && eigenvalues.minCoeff() < -opts.negative_tolerance)
    fail(ErrorKind::Numerical, "two-electron supermatrix has eigenvalue " + std::to_string(eigenvalues.minCoeff()) +
                                   " (not positive semidefinite)");
  const auto order = ranked(eigenvalues);
  const Eigen::Index available = std::min<Eigen::Index>(rank, eigenvalues.size());
  for (Eigen::Index t = 0; t < available; ++t) {
    const Eigen::Index k = order[static_cast<std::size_t>(t)];
    const double lambda = std::max(eigenvalues(k), 0.0);
    out.eigenvalues(t) = lambda;
    if (dense)
      out.leaves.col(t) = std::sqrt(lambda) * basis.col(k);
    else
      out.leaves.col(t) = cholesky * basis.col(k);
  }
  return out;
}

Matrix df_one_body(const hamiltonian::MOHamiltonian& ham) {
  const int n = ham.n_orb();
  Matrix f = modified_one_body(ham);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double sum = 0.0;
      for (int r = 0; r < n; ++r) sum += ham.v(p, q, r, r);
      f(p, q) += sum;
    }
  return 0.5 * (f + f.transpose());
}

DFFactorization df_factorize(const hamiltonian::MOHamiltonian& ham, int rank, const DFOptions& opts) {
  const int n = ham.n_orb();
  const FirstLevel first = first_level(ham.v, rank, opts);
  DFFactorization out;
  out.rank = rank;
  out.dense_route = n <= opts.dense_max_orbitals;

  Eigen::SelfAdjointEigenSolver<Matrix> one(df_one_body(ham));
  out.one_body_vectors = one.eigenvectors();
  out.one_body_weights = one.eigenvalues();
  out.one_body_norm = out.one_body_weights.cwiseAbs().sum();

  out.leaves.reserve(static_cast<std::size_t>(rank));
  double two = 0.0;
  for (int t = 0; t < rank; ++t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(leaf_matrix(first.leaves, t, n));
    DFLeaf leaf{es.eigenvectors(), es.eigenvalues()};
    const double s = leaf.weights.cwiseAbs().sum();
    two += s * s;
    out.leaves.push_back(std::move(leaf));
  }
  out.two_body_norm = 0.25 * two;

  if (opts.compute_error) out.reconstruction_error = (ham.v.matrix() - reconstruct(out, n)).norm();
  return out;
}

Matrix reconstruct(const DFFactorization& df, int n_orb) {
  const Eigen::Index dim = Eigen::Index(n_orb) * n_orb;
  Matrix stacked(dim, static_cast<Eigen::Index>(df.leaves.size()));
  for (std::size_t t = 0; t < df.leaves.size(); ++t) {
    const auto& leaf = df.leaves[t];
    const Matrix l = leaf.vectors * leaf.weights.asDiagonal() * leaf.vectors.transpose();
    stacked.col(static_cast<Eigen::Index>(t)) = Eigen::Map<const Vector>(l.data(), dim);
  }
  Matrix out(dim, dim);
  out.noalias() = stacked * stacked.transpose();
  return out;
}

}  // namespace qpecost::norms
