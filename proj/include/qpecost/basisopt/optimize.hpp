#pragma once

#include "qpecost/basisopt/cost.hpp"

#include <string>
#include <vector>

namespace qpecost::basisopt {

struct TracePoint {
  int iteration = 0;
  std::vector<double> theta;
  double energy = 0.0;
  double lambda = 0.0;
  double g = 0.0;
};

struct OptimizationTrace {
  std::vector<TracePoint> points;  // best vertex per iteration, start first
  std::size_t best = 0;
  std::string termination;
  int evaluations = 0;
  int rejected = 0;
};

struct OptimizationResult {
  chem::BasisSet basis;
  chem::ParameterVector parameters;
  OptimizationTrace trace;
  CostValue initial;
  CostValue best;
};

/// Simplex descent over the masked parameters; returns the best-g iterate.
OptimizationResult optimize_basis(const OptimizationConfig& config);

/// Sequential stages sharing one config: each stage optimizes its mask on
/// top of the previous stage's best basis.
std::vector<OptimizationResult> optimize_stages(const OptimizationConfig& config,
                                                const std::vector<std::vector<chem::ParameterSlot>>& stages);

}  // namespace qpecost::basisopt
