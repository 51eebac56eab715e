#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace qpecost::correlation {

enum class CILevel { CISD, FCI };

const char* to_string(CILevel level);

struct CIOptions {
  double residual_tol = 1e-8;
  int max_iter = 200;
  int max_subspace = 32;
  /// Determinant caps per level.
  std::size_t max_fci_determinants = 2'000'000;
  std::size_t max_cisd_determinants = 500'000;
  /// Spaces up to this size are diagonalized densely.
  std::size_t dense_limit = 1000;
};

struct CIResult {
  CILevel level = CILevel::CISD;
  double energy = 0.0;
  std::size_t n_determinants = 0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  Vector vector;  // ground-state coefficients in the internal ordering
};

using OrbitalString = unsigned __int128;

struct OrbitalStringHash {
  std::size_t operator()(OrbitalString s) const {
    const auto lo = static_cast<std::uint64_t>(s);
    const auto hi = static_cast<std::uint64_t>(s >> 64);
    return std::hash<std::uint64_t>()(lo ^ (hi * 0x9e3779b97f4a7c15ull));
  }
};

/// MS = 0 determinant space: alpha and beta strings share one list sorted
/// by excitation level relative to the aufbau reference. A determinant is
/// kept when the alpha and beta levels sum to at most `max_total_level`, so
/// alpha string I pairs with the first `width(I)` beta strings.
class DeterminantSpace {
 public:
  DeterminantSpace(int n_orb, int n_occ, int max_total_level);

  int n_orb() const { return n_orb_; }
  int n_occ() const { return n_occ_; }
  std::size_t n_strings() const { return strings_.size(); }
  std::size_t size() const { return total_; }

  const std::vector<OrbitalString>& strings() const { return strings_; }
  int level(std::size_t i) const { return levels_[i]; }
  std::size_t width(std::size_t alpha) const { return width_[alpha]; }
  std::size_t offset(std::size_t alpha) const { return offset_[alpha]; }
  /// Index of a string, or -1 if it lies outside the space.
  long find(OrbitalString s) const;

 private:
  int n_orb_, n_occ_;
  std::vector<OrbitalString> strings_;
  std::unordered_map<OrbitalString, long, OrbitalStringHash> index_;
  std::vector<int> levels_;
  std::vector<std::size_t> width_, offset_;
  std::size_t total_ = 0;
};

/// Number of determinants a run at `level` would use, without building it.
std::size_t count_determinants(int n_orb, int n_elec, CILevel level);

/// Lowest eigenvalue of `ham` in the CISD or full determinant space.
CIResult run_ci(const hamiltonian::MOHamiltonian& ham, CILevel level, const CIOptions& opts = {});

}  // namespace qpecost::correlation
