#pragma once

#include "qpecost/chem/basis.hpp"

#include <string>
#include <vector>

namespace qpecost::chem {

enum class SlotKind { Exponent, Coefficient };

/// Addresses one real inside a BasisSet: element, shell index, primitive
/// row and (for coefficients) contracted column.
struct ParameterSlot {
  std::string element;
  int shell = 0;
  int primitive = 0;
  int column = 0;
  SlotKind kind = SlotKind::Exponent;

  /// Exponent slots are stored as log(alpha); positivity holds by construction.
  bool positive() const { return kind == SlotKind::Exponent; }
  bool operator==(const ParameterSlot&) const = default;
};

struct ParameterVector {
  std::vector<double> values;
  std::vector<ParameterSlot> mask;

  std::size_t size() const { return values.size(); }
  Vector as_vector() const { return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())); }
  ParameterVector with_values(const Vector& v) const;
};

/// Slots for every exponent and coefficient of one shell.
std::vector<ParameterSlot> shell_slots(const BasisSet& basis, const std::string& element, int shell);

/// Current values of `mask` read out of `basis` (exponents in log domain).
ParameterVector read_parameters(const BasisSet& basis, std::vector<ParameterSlot> mask);

/// Copy of `base` with every masked slot overwritten; exponents receive exp(theta).
BasisSet apply_parameters(const BasisSet& base, const ParameterVector& theta);

}  // namespace qpecost::chem
