#include "qpecost/scf/rhf.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <deque>
#include <limits>

namespace qpecost::scf {

Matrix ScfResult::density() const {
  const auto occ = coefficients.leftCols(n_occ);
  return 2.0 * occ * occ.transpose();
}

Matrix canonical_orthogonalizer(const Matrix& overlap, double threshold, int* n_dropped) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(overlap);
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "overlap diagonalization failed");
  const Vector& w = es.eigenvalues();
  int first = 0;
  while (first < w.size() && w(first) < threshold) ++first;
  if (first == w.size()) fail(ErrorKind::Numerical, "overlap matrix is numerically singular");
  if (n_dropped) *n_dropped = first;
  const Eigen::Index keep = w.size() - first;
  return es.eigenvectors().rightCols(keep) * w.tail(keep).cwiseSqrt().cwiseInverse().asDiagonal();
}

std::pair<Matrix, Matrix> coulomb_exchange(const EriTensor& eri, const Matrix& density) {
  const int n = eri.n();
  const Matrix& m = eri.matrix();
  Matrix j(n, n);
  Eigen::Map<Vector>(j.data(), Eigen::Index(n) * n).noalias() =
      m * Eigen::Map<const Vector>(density.data(), Eigen::Index(n) * n);
  // K_{mu nu} = sum_{lam sig} (mu lam|nu sig) D_{lam sig}; column (mu lam) of
  // the symmetric supermatrix reshapes to the (sig, nu) block.
  Matrix k = Matrix::Zero(n, n);
  for (int mu = 0; mu < n; ++mu)
    for (int lam = 0; lam < n; ++lam) {
      Eigen::Map<const Matrix> block(m.col(eri.pair(mu, lam)).data(), n, n);
      k.row(mu).noalias() += (block.transpose() * density.col(lam)).transpose();
    }
  return {j, k};
}

namespace {

class Diis {
 public:
  explicit Diis(int depth) : depth_(depth) {}

  Matrix extrapolate(const Matrix& fock, const Matrix& error) {
    focks_.push_back(fock);
    errors_.push_back(error);
    if (static_cast<int>(focks_.size()) > depth_) {
      focks_.pop_front();
      errors_.pop_front();
    }
    while (focks_.size() > 1) {
      const auto n = static_cast<Eigen::Index>(focks_.size());
      Matrix b = Matrix::Zero(n + 1, n + 1);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k <= i; ++k)
          b(i, k) = b(k, i) = errors_[static_cast<std::size_t>(i)].cwiseProduct(errors_[static_cast<std::size_t>(k)]).sum();
      b.row(n).head(n).setConstant(-1.0);
      b.col(n).head(n).setConstant(-1.0);
      Vector rhs = Vector::Zero(n + 1);
      rhs(n) = -1.0;
      Eigen::FullPivLU<Matrix> lu(b);
      if (lu.rank() == n + 1) {
        const Vector c = lu.solve(rhs);
        Matrix out = Matrix::Zero(fock.rows(), fock.cols());
        for (Eigen::Index i = 0; i < n; ++i) out += c(i) * focks_[static_cast<std::size_t>(i)];
        return out;
      }
      focks_.pop_front();
      errors_.pop_front();
    }
    return fock;
  }

 private:
  int depth_;
  std::deque<Matrix> focks_, errors_;
};

}  // namespace

namespace {

ScfResult iterate(const integrals::IntegralSet& ints, int n_electrons, const ScfOptions& opts) {
  if (n_electrons < 0 || n_electrons % 2 != 0)
    fail(ErrorKind::Input, "restricted Hartree-Fock needs an even, non-negative electron count");
  const int n = ints.n_ao;
  ScfResult res;
  const Matrix x = canonical_orthogonalizer(ints.overlap, opts.lindep_threshold, &res.n_dropped);
  res.n_occ = n_electrons / 2;
  if (res.n_occ > x.cols())
    fail(ErrorKind::Input, "too many electrons (" + std::to_string(n_electrons) + ") for " +
                               std::to_string(x.cols()) + " molecular orbitals");
  const Matrix h = ints.core_hamiltonian();
  const Matrix& s = ints.overlap;

  auto diagonalize = [&](const Matrix& fock) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.transpose() * fock * x);
    if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "Fock diagonalization failed");
    res.coefficients = x * es.eigenvectors();
    res.orbital_energies = es.eigenvalues();
  };

  Matrix d;
  if (opts.initial_density) {
    if (opts.initial_density->rows() != n || opts.initial_density->cols() != n)
      fail(ErrorKind::Input, "initial density has the wrong dimension");
    d = *opts.initial_density;
  } else {
    diagonalize(h);
    d = res.density();
  }
  if (res.coefficients.size() == 0) diagonalize(h);

  Diis diis(opts.diis_depth);
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < opts.max_iter; ++it) {
    const auto [j, k] = coulomb_exchange(ints.eri, d);
    const Matrix fock = h + j - 0.5 * k;
    const double energy = 0.5 * d.cwiseProduct(h + fock).sum() + ints.e_nuc;
    const Matrix fds = fock * d * s;
    const Matrix err = x.transpose() * (fds - fds.transpose()) * x;
    const double err_norm = err.norm();
    const double delta = energy - previous;
    res.history.push_back({energy, std::isnan(delta) ? 0.0 : delta, err_norm});
    res.energy = energy;
    previous = energy;
    if (std::abs(delta) <= opts.energy_tol && err_norm <= opts.diis_tol) {
      diagonalize(fock);
      return res;
    }
    diagonalize(opts.diis_depth > 0 ? diis.extrapolate(fock, err) : fock);
    d = res.density();
  }
  throw NotConverged("RHF did not converge in " + std::to_string(opts.max_iter) + " iterations", std::move(res));
}

double determinant_energy(const integrals::IntegralSet& ints, const Matrix& d) {
  const Matrix h = ints.core_hamiltonian();
  const auto [j, k] = coulomb_exchange(ints.eri, d);
  return 0.5 * d.cwiseProduct(2.0 * h + j - 0.5 * k).sum() + ints.e_nuc;
}

// Density after rotating the occupied orbitals by exp(K), K_ai = t * mode.
Matrix rotated_density(const ScfResult& scf, const Vector& mode, double t) {
  const int o = scf.n_occ;
  const int n = scf.n_mo();
  Matrix k = Matrix::Zero(n, n);
  for (int a = 0; a < n - o; ++a)
    for (int i = 0; i < o; ++i) {
      k(o + a, i) = t * mode(a * o + i);
      k(i, o + a) = -k(o + a, i);
    }
  const Matrix u = k.exp();
  const Matrix c = scf.coefficients * u.leftCols(o);
  return 2.0 * c * c.transpose();
}

}  // namespace

std::pair<double, Vector> lowest_hessian_mode(const integrals::IntegralSet& ints, const ScfResult& scf) {
  const int o = scf.n_occ;
  const int n = scf.n_mo();
  const int v = n - o;
  if (o == 0 || v == 0) return {std::numeric_limits<double>::infinity(), Vector()};
  const EriTensor mo = transform(ints.eri, scf.coefficients);
  const Eigen::Index dim = Eigen::Index(o) * v;
  Matrix hess(dim, dim);
  for (int a = 0; a < v; ++a)
    for (int i = 0; i < o; ++i)
      for (int b = 0; b < v; ++b)
        for (int j = 0; j < o; ++j) {
          double x = 4.0 * mo(o + a, i, o + b, j) - mo(o + a, o + b, i, j) - mo(o + a, j, o + b, i);
          if (a == b && i == j) x += scf.orbital_energies(o + a) - scf.orbital_energies(i);
          hess(a * o + i, b * o + j) = x;
        }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hess);
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "orbital Hessian diagonalization failed");
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

ScfResult run_rhf(const integrals::IntegralSet& ints, int n_electrons, const ScfOptions& opts) {
  ScfResult res = iterate(ints, n_electrons, opts);
  for (int pass = 0; pass < opts.stability_passes; ++pass) {
    const auto [lowest, mode] = lowest_hessian_mode(ints, res);
    res.lowest_hessian_eigenvalue = lowest;
    if (!(lowest < opts.stability_threshold)) break;
    double best_t = 0.0, best_e = res.energy;
    for (double t : {0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8}) {
      const double e = determinant_energy(ints, rotated_density(res, mode, t));
      if (e < best_e) best_e = e, best_t = t;
    }
    if (best_t == 0.0) break;
    ScfOptions restart = opts;
    restart.initial_density = rotated_density(res, mode, best_t);
    ScfResult next;
    try {
      next = iterate(ints, n_electrons, restart);
    } catch (const NotConverged&) {
      break;
    }
    if (!(next.energy < res.energy - 1e-9)) break;
    res = std::move(next);
  }
  return res;
}

}  // namespace qpecost::scf
