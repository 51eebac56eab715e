#include "qpecost/basisopt/scan.hpp"

#include "qpecost/fno/pipeline.hpp"
#include "qpecost/norms/sparse_norm.hpp"
#include "qpecost/scf/mo_transform.hpp"

#include <cmath>

namespace qpecost::basisopt {

chem::BasisSet add_primitive(const chem::BasisSet& basis, const std::string& element, int l, double alpha) {
  auto shells = basis.shells(element);
  shells.emplace_back(l, std::vector<double>{alpha}, Matrix::Ones(1, 1));
  chem::BasisSet out = basis;
  out.set_shells(element, std::move(shells));
  return out;
}

namespace {

ScanPoint evaluate_point(const chem::Molecule& mol, const chem::BasisSet& basis, const ScanOptions& opts) {
  ScanPoint p;
  try {
    const auto ints = integrals::compute_integrals(mol, basis, opts.integrals);
    Eigen::SelfAdjointEigenSolver<Matrix> es(ints.overlap, Eigen::EigenvaluesOnly);
    p.min_overlap_eigenvalue = es.eigenvalues()[0];
    p.n_orb = ints.n_ao;
    if (p.min_overlap_eigenvalue < opts.lindep_threshold) {
      p.linear_dependent = true;
      p.ok = false;
      p.error = "linearly dependent basis";
      return p;
    }
    const auto scf = scf::run_rhf(mol, basis, ints, opts.scf);
    const auto ham = scf::transform_to_mo(ints, scf);
    p.e_hf = scf.energy;
    p.lambda_sparse = norms::sparse_norm(ham).effective();
    p.lambda_df = fno::df_lambda(ham, opts.df_ratio);
    if (opts.with_fci) p.e_fci = correlation::run_ci(ham, correlation::CILevel::FCI, opts.ci).energy;
  } catch (const Error& e) {
    p.ok = false;
    p.error = e.what();
  }
  return p;
}

}  // namespace

ScanTable scan_augmented_primitive(const chem::Molecule& mol, const chem::BasisSet& basis,
                                   const std::string& element, int l, const std::vector<double>& grid,
                                   const ScanOptions& opts) {
  if (l < 0 || l > 1) fail(ErrorKind::Input, "primitive scans cover s and p shells");
  if (!basis.has(element)) fail(ErrorKind::Input, "basis has no entry for " + element);
  ScanTable t;
  t.element = element;
  t.l = l;
  t.unaugmented = evaluate_point(mol, basis, opts);
  for (double alpha : grid) {
    ScanPoint p;
    try {
      p = evaluate_point(mol, add_primitive(basis, element, l, alpha), opts);
    } catch (const Error& e) {
      p.ok = false;
      p.error = e.what();
    }
    p.exponent = alpha;
    t.points.push_back(std::move(p));
  }
  return t;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0 && hi > lo) || n < 2) fail(ErrorKind::Input, "log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g;
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g.push_back(lo * std::exp(step * i));
  return g;
}

ScalingFit lambda_scaling(const chem::Molecule& mol, const std::vector<chem::BasisSet>& bases,
                          const ScanOptions& opts) {
  if (bases.size() < 2) fail(ErrorKind::Input, "scaling fit needs at least two bases");
  ScalingFit fit;
  for (const auto& b : bases) {
    ScanOptions o = opts;
    o.with_fci = false;
    const auto p = evaluate_point(mol, b, o);
    if (!p.ok) fail(ErrorKind::Numerical, "scaling point " + b.name() + " failed: " + p.error);
    fit.points.push_back({b.name(), p.n_orb, p.lambda_df, p.lambda_sparse});
  }
  const auto m = static_cast<Eigen::Index>(fit.points.size());
  Matrix a(m, 2);
  Vector y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = std::log(static_cast<double>(fit.points[static_cast<std::size_t>(i)].n_orb));
    a(i, 1) = 1.0;
    y[i] = std::log(fit.points[static_cast<std::size_t>(i)].lambda_df);
  }
  const Vector c = a.colPivHouseholderQr().solve(y);
  fit.exponent = c[0];
  fit.prefactor = std::exp(c[1]);
  return fit;
}

}  // namespace qpecost::basisopt
