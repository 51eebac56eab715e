#pragma once

#include "qpecost/correlation/ci.hpp"
#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace qpecost::correlation {

enum class EnergyMethod { HF, MP2, CISD, FCI };

const char* to_string(EnergyMethod method);
EnergyMethod parse_energy_method(std::string_view text);

struct MethodEnergy {
  EnergyMethod requested = EnergyMethod::CISD;
  EnergyMethod used = EnergyMethod::CISD;  // differs when CISD fell back to MP2
  double total = 0.0;
  double reference = 0.0;  // closed-shell determinant energy of `ham`

  double correlation() const { return total - reference; }
};

/// Total energy of `ham` with `method`. `orbital_energies` must be the
/// Fock diagonal (canonical or semicanonical). With `allow_fallback`, a
/// CISD request above the determinant cap is answered with MP2.
MethodEnergy method_energy(const hamiltonian::MOHamiltonian& ham, const Vector& orbital_energies,
                           EnergyMethod method, const CIOptions& ci = {}, bool allow_fallback = true);

}  // namespace qpecost::correlation
