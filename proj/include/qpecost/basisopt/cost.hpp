#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/molecule.hpp"
#include "qpecost/chem/parameters.hpp"
#include "qpecost/correlation/energy.hpp"
#include "qpecost/integrals/engine.hpp"
#include "qpecost/scf/rhf.hpp"

#include <string>

namespace qpecost::basisopt {

using correlation::EnergyMethod;

struct OptimizationConfig {
  chem::Molecule molecule;
  chem::BasisSet basis;             // basis the parameters are applied to
  chem::ParameterVector start;      // mask and initial values
  double gamma = 0.0;               // 0 <= gamma <= 1, typically weight / lambda_ref
  EnergyMethod method = EnergyMethod::CISD;
  int max_iter = 100;
  double df_ratio = 5.0;
  double exponent_step = 0.1;       // initial simplex step in log(alpha)
  double coefficient_step = 0.5;
  scf::ScfOptions scf;
  integrals::IntegralOptions integrals;
  correlation::CIOptions ci;

  void validate() const;
};

/// gamma for a target weight in units of the reference norm.
double gamma_from_reference(double weight, double lambda_ref);

struct CostValue {
  double g = 0.0;
  double energy = 0.0;
  double lambda = 0.0;
  bool ok = true;
  std::string diagnostic;

  /// +inf sentinel for a rejected trial point.
  static CostValue rejected(std::string why);
};

/// g = (1 - gamma) E + gamma lambda_DF(ratio * N) for the basis at theta.
/// SCF failures and invalid parameter points come back as the sentinel.
CostValue evaluate_cost(const chem::ParameterVector& theta, const OptimizationConfig& config);

}  // namespace qpecost::basisopt
