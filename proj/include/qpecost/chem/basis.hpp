#pragma once

#include "qpecost/chem/molecule.hpp"
#include "qpecost/common.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qpecost::chem {

/// One angular-momentum shell of (generally) contracted Gaussians.
///
/// `coefficients` is n_primitives x n_contracted; each column defines one
/// contracted radial function. Coefficients multiply normalized primitives.
/// Primitives are kept sorted by strictly decreasing exponent.
class BasisShell {
 public:
  BasisShell(int l, std::vector<double> exponents, Matrix coefficients);

  int l() const { return l_; }
  const std::vector<double>& exponents() const { return exponents_; }
  const Matrix& coefficients() const { return coefficients_; }
  int n_primitives() const { return static_cast<int>(exponents_.size()); }
  int n_contracted() const { return static_cast<int>(coefficients_.cols()); }
  int n_functions() const { return (2 * l_ + 1) * n_contracted(); }

  bool operator==(const BasisShell&) const = default;

 private:
  int l_;
  std::vector<double> exponents_;
  Matrix coefficients_;
};

class BasisSet {
 public:
  BasisSet() = default;
  explicit BasisSet(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  bool spherical() const { return true; }

  bool has(std::string_view element) const { return shells_.count(std::string(element)) > 0; }
  const std::vector<BasisShell>& shells(std::string_view element) const;
  void set_shells(std::string_view element, std::vector<BasisShell> shells);
  const std::map<std::string, std::vector<BasisShell>>& elements() const { return shells_; }
  bool empty() const { return shells_.empty(); }

  /// Number of spherical AOs this basis produces on `mol`.
  int n_functions(const Molecule& mol) const;
  void check_covers(const Molecule& mol) const;

  std::uint64_t hash() const;

  bool operator==(const BasisSet& o) const { return shells_ == o.shells_; }

 private:
  std::string name_;
  std::map<std::string, std::vector<BasisShell>> shells_;
};

/// Parses the element -> [shell] JSON schema.
BasisSet parse_basis(std::string_view json_text, std::string name = {});
BasisSet load_basis(const std::filesystem::path& path);
std::string serialize_basis(const BasisSet& basis);
void save_basis(const BasisSet& basis, const std::filesystem::path& path);

/// `base` with every element present in `override_basis` replaced by that entry.
BasisSet with_elements_from(const BasisSet& base, const BasisSet& override_basis,
                            const std::vector<std::string>& elements);

}  // namespace qpecost::chem
