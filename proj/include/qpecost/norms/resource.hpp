#pragma once

#include <cstdint>

namespace qpecost::norms {

/// Coarse qubitized-QPE cost proxies.
struct ResourceEstimate {
  double lambda = 0.0;
  double epsilon = 0.0;
  std::uint64_t walk_calls = 0;  // ceil(pi * lambda / (2 * epsilon))
  std::uint64_t block_encoding_cost = 0;  // N * N_DF
};

ResourceEstimate resource_estimate(double lambda, double epsilon, int n_orb, int rank);

}  // namespace qpecost::norms
