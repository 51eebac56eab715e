#include "qpecost/integrals/boys.hpp"

#include "qpecost/common.hpp"

#include <cmath>

namespace qpecost::integrals {

double boys_series(int m, double x) {
  // F_m(x) = exp(-x) * sum_k (2x)^k / ((2m+1)(2m+3)...(2m+2k+1))
  double term = 1.0 / (2 * m + 1);
  double sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= 2.0 * x / (2 * m + 2 * k + 1);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-x) * sum;
}

BoysTable::BoysTable() {
  n_nodes_ = static_cast<int>(std::ceil(kSwitchPoint / kSpacing)) + 2;
  nodes_.resize(static_cast<std::size_t>(n_nodes_) * kColumns);
  for (int k = 0; k < n_nodes_; ++k) {
    const double x = k * kSpacing;
    double* row = &nodes_[static_cast<std::size_t>(k) * kColumns];
    row[kColumns - 1] = boys_series(kColumns - 1, x);
    const double ex = std::exp(-x);
    for (int m = kColumns - 2; m >= 0; --m) row[m] = (2.0 * x * row[m + 1] + ex) / (2 * m + 1);
  }
}

const BoysTable& BoysTable::instance() {
  static const BoysTable table;
  return table;
}

void BoysTable::evaluate(int m_max, double x, double* out) const {
  if (x < kSwitchPoint) {
    const int k = static_cast<int>(x / kSpacing + 0.5);
    const double dx = k * kSpacing - x;
    const double* row = &nodes_[static_cast<std::size_t>(k) * kColumns];
    // Taylor: F_m(x0 - d) = sum_j F_{m+j}(x0) d^j / j!
    double value = 0.0;
    double factor = 1.0;
    for (int j = 0; j < kTaylorTerms; ++j) {
      value += row[m_max + j] * factor;
      factor *= dx / (j + 1);
    }
    out[m_max] = value;
    if (m_max > 0) {
      const double ex = std::exp(-x);
      for (int m = m_max - 1; m >= 0; --m) out[m] = (2.0 * x * out[m + 1] + ex) / (2 * m + 1);
    }
  } else {
    out[0] = 0.5 * std::sqrt(M_PI / x);
    if (m_max > 0) {
      const double ex = std::exp(-x);
      const double inv2x = 0.5 / x;
      for (int m = 0; m < m_max; ++m) out[m + 1] = ((2 * m + 1) * out[m] - ex) * inv2x;
    }
  }
}

double boys(int m, double x) {
  if (m < 0 || m > BoysTable::kMaxOrder)
    fail(ErrorKind::Input, "Boys order " + std::to_string(m) + " exceeds table order");
  if (!(x >= 0.0)) fail(ErrorKind::Input, "Boys argument must be non-negative");
  double buf[BoysTable::kMaxOrder + 1];
  BoysTable::instance().evaluate(m, x, buf);
  return buf[m];
}

}  // namespace qpecost::integrals
