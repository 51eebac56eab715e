#include "helpers.hpp"

#include "qpecost/scf/mo_transform.hpp"

#include <map>

namespace testing {

chem::Molecule geometry(const std::string& name) { return chem::load_geometry(data_path("geometries/" + name + ".xyz")); }

const chem::BasisSet& basis(const std::string& name) {
  static std::map<std::string, chem::BasisSet> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, chem::load_basis(data_path("basis/" + name + ".json"))).first;
  return it->second;
}

const System& system(const std::string& geom, const std::string& bas) {
  static std::map<std::pair<std::string, std::string>, System> cache;
  const auto key = std::make_pair(geom, bas);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto mol = geometry(geom);
    System s;
    s.ints = integrals::compute_integrals(mol, basis(bas));
    s.scf = scf::run_rhf(mol, basis(bas), s.ints);
    s.ham = scf::transform_to_mo(s.ints, s.scf);
    it = cache.emplace(key, std::move(s)).first;
  }
  return it->second;
}

Matrix random_orthogonal(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, n);
}

hamiltonian::MOHamiltonian random_hamiltonian(int n, int n_elec, std::mt19937& rng) {
  std::normal_distribution<double> g;
  hamiltonian::MOHamiltonian ham;
  ham.n_elec = n_elec;
  ham.e_core = g(rng);
  Matrix h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = g(rng);
  ham.h = 0.5 * (h + h.transpose());
  // (pq|rs) = sum_k L^k_pq L^k_rs with symmetric L^k is PSD and 8-fold symmetric.
  ham.v = EriTensor(n);
  const int nn = n * n;
  Matrix leaves(nn, n + 2);
  for (int k = 0; k < leaves.cols(); ++k) {
    Matrix l(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) l(i, j) = 0.5 * g(rng);
    l = (0.5 * (l + l.transpose())).eval();
    leaves.col(k) = Eigen::Map<const Vector>(l.data(), nn);
  }
  ham.v.matrix() = leaves * leaves.transpose();
  return ham;
}

}  // namespace testing
