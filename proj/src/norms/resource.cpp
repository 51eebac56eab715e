#include "qpecost/norms/resource.hpp"

#include "qpecost/common.hpp"

#include <cmath>

namespace qpecost::norms {

ResourceEstimate resource_estimate(double lambda, double epsilon, int n_orb, int rank) {
  if (!(lambda > 0.0)) fail(ErrorKind::Input, "resource estimate needs a positive 1-norm");
  if (!(epsilon > 0.0)) fail(ErrorKind::Input, "resource estimate needs a positive target precision");
  if (n_orb < 1 || rank < 1) fail(ErrorKind::Input, "resource estimate needs positive N and N_DF");
  const double calls = std::ceil(M_PI * lambda / (2.0 * epsilon));
  if (!(calls < 1.8e19)) fail(ErrorKind::Capacity, "walk-call count overflows 64 bits");
  return {lambda, epsilon, static_cast<std::uint64_t>(calls),
          static_cast<std::uint64_t>(n_orb) * static_cast<std::uint64_t>(rank)};
}

}  // namespace qpecost::norms
