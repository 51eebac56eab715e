#pragma once

#include <vector>

namespace qpecost::integrals {

/// Tabulated Boys function F_m(x) = int_0^1 t^{2m} exp(-x t^2) dt.
///
/// Below `switch_point` values come from an 8-term Taylor expansion around
/// the nearest grid node followed by downward recursion; above it from the
/// asymptotic F_0 and upward recursion.
class BoysTable {
 public:
  static constexpr int kMaxOrder = 16;
  static constexpr double kSpacing = 0.05;
  static constexpr double kSwitchPoint = 35.0;

  static const BoysTable& instance();

  int max_order() const { return kMaxOrder; }

  /// Fills out[0..m_max] with F_0(x)..F_{m_max}(x). No argument checks.
  void evaluate(int m_max, double x, double* out) const;

 private:
  BoysTable();
  static constexpr int kTaylorTerms = 8;
  static constexpr int kColumns = kMaxOrder + kTaylorTerms + 1;
  int n_nodes_ = 0;
  std::vector<double> nodes_;  // n_nodes_ x kColumns, row-major
};

/// Checked single-value Boys function.
double boys(int m, double x);

/// Reference series, accurate to ~1e-16 relative for x <= ~50.
double boys_series(int m, double x);

}  // namespace qpecost::integrals
