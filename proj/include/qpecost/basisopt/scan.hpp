#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/molecule.hpp"
#include "qpecost/correlation/ci.hpp"
#include "qpecost/integrals/engine.hpp"
#include "qpecost/scf/rhf.hpp"

#include <string>
#include <vector>

namespace qpecost::basisopt {

struct ScanOptions {
  scf::ScfOptions scf;
  integrals::IntegralOptions integrals;
  correlation::CIOptions ci;
  double df_ratio = 5.0;
  bool with_fci = true;
  /// Smallest overlap eigenvalue below which an augmented basis is flagged.
  double lindep_threshold = 1e-8;
};

struct ScanPoint {
  double exponent = 0.0;
  int n_orb = 0;
  double lambda_sparse = 0.0;
  double lambda_df = 0.0;
  double e_hf = 0.0;
  double e_fci = 0.0;
  double min_overlap_eigenvalue = 0.0;
  bool linear_dependent = false;
  bool ok = true;
  std::string error;
};

struct ScanTable {
  std::string element;
  int l = 0;
  ScanPoint unaugmented;  // exponent 0
  std::vector<ScanPoint> points;
};

/// `basis` plus one uncontracted shell of angular momentum `l` and
/// exponent `alpha` on `element`.
chem::BasisSet add_primitive(const chem::BasisSet& basis, const std::string& element, int l, double alpha);

/// One row per grid exponent: sparse and DF norms, RHF and FCI energies.
/// Failing points are marked and the scan continues.
ScanTable scan_augmented_primitive(const chem::Molecule& mol, const chem::BasisSet& basis,
                                   const std::string& element, int l, const std::vector<double>& grid,
                                   const ScanOptions& opts = {});

/// Logarithmically spaced grid, both ends included.
std::vector<double> log_grid(double lo, double hi, int n);

struct ScalingPoint {
  std::string basis;
  int n_orb = 0;
  double lambda_df = 0.0;
  double lambda_sparse = 0.0;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;   // slope of log(lambda_DF) against log(N)
  double prefactor = 0.0;
};

/// lambda against N across bases, with a least-squares power-law fit.
ScalingFit lambda_scaling(const chem::Molecule& mol, const std::vector<chem::BasisSet>& bases,
                          const ScanOptions& opts = {});

}  // namespace qpecost::basisopt
