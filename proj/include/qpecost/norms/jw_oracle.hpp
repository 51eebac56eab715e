#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace qpecost::norms {

inline constexpr int kMaxOracleOrbitals = 8;

/// Pauli string over up to 32 qubits in symplectic form: qubit k carries
/// X if bit k of `x` is set, Z if bit k of `z` is set, Y if both.
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;

  bool identity() const { return x == 0 && z == 0; }
  std::string label(int n_qubits) const;
  auto operator<=>(const PauliString&) const = default;
};

struct PauliExpansion {
  int n_qubits = 0;
  std::map<PauliString, std::complex<double>> terms;  // merged, near-zero removed
};

/// Explicit Jordan-Wigner expansion over 2N spin orbitals (ordering 2p+spin).
PauliExpansion jordan_wigner(const hamiltonian::MOHamiltonian& ham, double drop_below = 1e-12);

struct OracleNorm {
  double with_identity = 0.0;
  double without_identity = 0.0;
  int n_terms = 0;              // including the identity if present
  int n_non_identity_terms = 0;
};

OracleNorm jw_oracle_norm(const hamiltonian::MOHamiltonian& ham);

}  // namespace qpecost::norms
