#include "qpecost/basisopt/optimize.hpp"

#include "qpecost/basisopt/simplex.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace qpecost::basisopt {

OptimizationResult optimize_basis(const OptimizationConfig& config) {
  config.validate();
  std::map<std::vector<double>, CostValue> seen;
  auto cost = [&](const Vector& x) -> const CostValue& {
    std::vector<double> key(x.data(), x.data() + x.size());
    auto it = seen.find(key);
    if (it == seen.end()) it = seen.emplace(key, evaluate_cost(config.start.with_values(x), config)).first;
    return it->second;
  };

  const Vector x0 = config.start.as_vector();
  Vector steps(x0.size());
  for (std::size_t i = 0; i < config.start.mask.size(); ++i)
    steps[static_cast<Eigen::Index>(i)] =
        config.start.mask[i].positive() ? config.exponent_step : config.coefficient_step;

  SimplexOptions so;
  so.max_iter = config.max_iter;
  const auto run = nelder_mead([&](const Vector& x) { return cost(x).g; }, x0, steps, so);

  OptimizationResult out;
  out.initial = cost(x0);
  if (!out.initial.ok && std::isinf(run.best.f))
    fail(ErrorKind::Convergence, "every trial point was rejected: " + out.initial.diagnostic);
  if (std::isinf(run.best.f)) fail(ErrorKind::Convergence, "every trial point was rejected");

  out.trace.termination = run.termination;
  out.trace.evaluations = run.evaluations;
  out.trace.rejected = run.rejected;
  double best_g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const auto& p = run.trace[i];
    const auto& c = cost(p.x);
    out.trace.points.push_back({static_cast<int>(i), std::vector<double>(p.x.data(), p.x.data() + p.x.size()),
                                c.energy, c.lambda, c.g});
    if (c.g < best_g) {
      best_g = c.g;
      out.trace.best = i;
    }
  }
  out.parameters = config.start.with_values(run.trace[out.trace.best].x);
  out.best = cost(run.trace[out.trace.best].x);
  out.basis = chem::apply_parameters(config.basis, out.parameters);
  return out;
}

std::vector<OptimizationResult> optimize_stages(const OptimizationConfig& config,
                                                const std::vector<std::vector<chem::ParameterSlot>>& stages) {
  std::vector<OptimizationResult> out;
  OptimizationConfig stage = config;
  for (const auto& mask : stages) {
    stage.start = chem::read_parameters(stage.basis, mask);
    out.push_back(optimize_basis(stage));
    stage.basis = out.back().basis;
  }
  return out;
}

}  // namespace qpecost::basisopt
