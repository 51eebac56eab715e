#include "qpecost/basisopt/cost.hpp"

#include "qpecost/fno/pipeline.hpp"
#include "qpecost/scf/mo_transform.hpp"

#include <cmath>
#include <limits>

namespace qpecost::basisopt {

void OptimizationConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorKind::Input, "gamma must lie in [0, 1]");
  if (max_iter < 1) fail(ErrorKind::Input, "iteration cap must be >= 1");
  if (method != EnergyMethod::CISD && method != EnergyMethod::MP2)
    fail(ErrorKind::Input, "basis optimization supports CISD or MP2 energies");
  if (start.values.size() != start.mask.size()) fail(ErrorKind::Input, "parameter vector length does not match mask");
}

double gamma_from_reference(double weight, double lambda_ref) {
  if (!(lambda_ref > 0)) fail(ErrorKind::Input, "reference norm must be positive");
  return weight / lambda_ref;
}

CostValue CostValue::rejected(std::string why) {
  CostValue c;
  c.g = c.energy = c.lambda = std::numeric_limits<double>::infinity();
  c.ok = false;
  c.diagnostic = std::move(why);
  return c;
}

CostValue evaluate_cost(const chem::ParameterVector& theta, const OptimizationConfig& config) {
  try {
    const auto basis = chem::apply_parameters(config.basis, theta);
    const auto ints = integrals::compute_integrals(config.molecule, basis, config.integrals);
    const auto scf = scf::run_rhf(config.molecule, basis, ints, config.scf);
    if (scf.n_dropped > 0) return CostValue::rejected("linearly dependent basis");
    const auto ham = scf::transform_to_mo(ints, scf);
    CostValue c;
    c.energy = correlation::method_energy(ham, scf.orbital_energies, config.method, config.ci, false).total;
    c.lambda = fno::df_lambda(ham, config.df_ratio);
    c.g = (1.0 - config.gamma) * c.energy + config.gamma * c.lambda;
    if (!std::isfinite(c.g)) return CostValue::rejected("non-finite cost");
    return c;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Capacity) throw;
    return CostValue::rejected(e.what());
  }
}

}  // namespace qpecost::basisopt
