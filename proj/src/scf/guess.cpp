#include "qpecost/scf/rhf.hpp"

#include <map>

namespace qpecost::scf {

namespace {

// Total (alpha + beta) density of a neutral atom with occupations spread
// evenly over the partially filled degenerate level.
Matrix atomic_density(const integrals::IntegralSet& ints, int n_electrons) {
  const Matrix x = canonical_orthogonalizer(ints.overlap, 1e-8);
  const Matrix h = ints.core_hamiltonian();
  const Eigen::Index n_mo = x.cols();
  Matrix d = Matrix::Zero(ints.n_ao, ints.n_ao);
  Matrix fock = h;
  for (int it = 0; it < 100; ++it) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.transpose() * fock * x);
    const Matrix c = x * es.eigenvectors();
    const Vector& e = es.eigenvalues();
    Vector occ = Vector::Zero(n_mo);
    double left = n_electrons;
    for (Eigen::Index i = 0; i < n_mo && left > 0;) {
      Eigen::Index j = i + 1;
      while (j < n_mo && e(j) - e(i) < 1e-3) ++j;
      const double take = std::min(left, 2.0 * double(j - i));
      occ.segment(i, j - i).setConstant(take / double(j - i));
      left -= take;
      i = j;
    }
    const Matrix next = c * occ.asDiagonal() * c.transpose();
    const double change = (next - d).cwiseAbs().maxCoeff();
    d = it == 0 ? next : Matrix(0.5 * (d + next));
    if (change < 1e-6) break;
    const auto [j, k] = coulomb_exchange(ints.eri, d);
    fock = h + j - 0.5 * k;
  }
  return d;
}

}  // namespace

Matrix atomic_density_guess(const chem::Molecule& mol, const chem::BasisSet& basis) {
  const auto shells = integrals::build_shells(mol, basis);
  int n_ao = 0;
  for (const auto& sh : shells) n_ao = std::max(n_ao, sh.offset + sh.size());
  Matrix guess = Matrix::Zero(n_ao, n_ao);
  std::map<std::string, Matrix> by_element;
  for (std::size_t a = 0; a < mol.size(); ++a) {
    const auto& atom = mol.atoms()[a];
    auto it = by_element.find(atom.symbol);
    if (it == by_element.end()) {
      // The charge only keeps the electron count even; occupations below use Z.
      const chem::Molecule lone({chem::Atom{atom.symbol, atom.charge, Vec3::Zero()}}, atom.charge % 2);
      it = by_element.emplace(atom.symbol, atomic_density(integrals::compute_integrals(lone, basis), atom.charge)).first;
    }
    std::vector<int> aos;
    for (const auto& sh : shells)
      if (sh.atom == static_cast<int>(a))
        for (int m = 0; m < sh.size(); ++m) aos.push_back(sh.offset + m);
    const Matrix& da = it->second;
    if (da.rows() != static_cast<Eigen::Index>(aos.size()))
      fail(ErrorKind::Numerical, "atomic guess dimension mismatch for " + atom.symbol);
    for (std::size_t i = 0; i < aos.size(); ++i)
      for (std::size_t j = 0; j < aos.size(); ++j) guess(aos[i], aos[j]) = da(i, j);
  }
  // Charged molecules: rescale to the molecular electron count.
  const double electrons = guess.cwiseProduct(integrals::compute_one_electron(mol, basis).overlap).sum();
  if (electrons > 0) guess *= mol.n_electrons() / electrons;
  return guess;
}

ScfResult run_rhf(const chem::Molecule& mol, const chem::BasisSet& basis, const integrals::IntegralSet& ints,
                  const ScfOptions& opts) {
  if (opts.initial_density) return run_rhf(ints, mol.n_electrons(), opts);
  ScfOptions with_guess = opts;
  with_guess.initial_density = atomic_density_guess(mol, basis);
  return run_rhf(ints, mol.n_electrons(), with_guess);
}

}  // namespace qpecost::scf
