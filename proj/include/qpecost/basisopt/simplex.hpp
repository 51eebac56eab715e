#pragma once

#include "qpecost/common.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qpecost::basisopt {

struct SimplexOptions {
  int max_iter = 100;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// Stop once the vertex values and the simplex diameter fall below these.
  double f_tol = 1e-10;
  double x_tol = 1e-8;
};

struct SimplexPoint {
  Vector x;
  double f = 0.0;
};

struct SimplexResult {
  SimplexPoint best;
  /// The starting point, then the best vertex after each iteration.
  std::vector<SimplexPoint> trace;
  int evaluations = 0;
  int rejected = 0;  // non-finite evaluations
  std::string termination;
};

/// Nelder-Mead minimization. Non-finite values are treated as infinitely
/// bad points. `steps` gives the initial edge length along each axis.
SimplexResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0, const Vector& steps,
                          const SimplexOptions& opts = {});

}  // namespace qpecost::basisopt
