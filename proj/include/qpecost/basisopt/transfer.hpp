#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/molecule.hpp"
#include "qpecost/correlation/energy.hpp"
#include "qpecost/integrals/engine.hpp"
#include "qpecost/scf/rhf.hpp"

#include <map>
#include <string>
#include <vector>

namespace qpecost::basisopt {

struct TransferOptions {
  std::vector<correlation::EnergyMethod> methods = {correlation::EnergyMethod::HF, correlation::EnergyMethod::MP2,
                                                    correlation::EnergyMethod::CISD};
  int max_orbitals = 230;  // larger molecules are skipped
  double df_ratio = 5.0;
  scf::ScfOptions scf;
  integrals::IntegralOptions integrals;
  correlation::CIOptions ci;
};

struct TransferRow {
  std::string name;
  int n_orb = 0;
  std::map<std::string, double> e_reference, e_optimized, delta;  // method tag -> value
  double lambda_reference = 0.0;
  double lambda_optimized = 0.0;
  double improvement_percent = 0.0;
  bool ok = true;
  std::string error;
};

/// Energies and lambda_DF of each molecule in both bases. CISD is skipped
/// (not substituted) above the determinant cap; failures are recorded per row.
std::vector<TransferRow> transfer_evaluate(const chem::BasisSet& optimized,
                                           const std::vector<std::pair<std::string, chem::Molecule>>& molecules,
                                           const chem::BasisSet& reference, const TransferOptions& opts = {});

}  // namespace qpecost::basisopt
