#pragma once

#include "qpecost/common.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qpecost::chem {

struct Atom {
  std::string symbol;
  int charge = 0;  // nuclear charge Z
  Vec3 position = Vec3::Zero();  // Bohr
};

/// Closed-shell molecular geometry. Positions are stored in Bohr.
class Molecule {
 public:
  Molecule() = default;
  Molecule(std::vector<Atom> atoms, int net_charge = 0, int multiplicity = 1);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  int net_charge() const { return net_charge_; }
  int multiplicity() const { return multiplicity_; }

  int n_electrons() const;
  double nuclear_repulsion() const;

  /// Rigid motions, used by invariance checks.
  Molecule translated(const Vec3& shift) const;
  Molecule rotated(const Eigen::Matrix3d& rotation) const;

  /// Stable 64-bit digest of symbols, charges and positions.
  std::uint64_t hash() const;

 private:
  std::vector<Atom> atoms_;
  int net_charge_ = 0;
  int multiplicity_ = 1;
};

/// Nuclear charge for an element symbol (H..Ar). Throws on unknown symbols.
int atomic_number(std::string_view symbol);

/// XYZ text in Ångström: count line, comment line, `El x y z` lines.
Molecule parse_xyz(std::string_view text, int net_charge = 0);
Molecule load_geometry(const std::filesystem::path& path, int net_charge = 0);

/// Two-atom molecule along z, bond length in Ångström.
Molecule diatomic(std::string_view a, std::string_view b, double bond_angstrom);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);

}  // namespace qpecost::chem
