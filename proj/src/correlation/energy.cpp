#include "qpecost/correlation/energy.hpp"

#include "qpecost/correlation/mp2.hpp"

#include <algorithm>
#include <cctype>

namespace qpecost::correlation {

const char* to_string(EnergyMethod method) {
  switch (method) {
    case EnergyMethod::HF:
      return "HF";
    case EnergyMethod::MP2:
      return "MP2";
    case EnergyMethod::CISD:
      return "CISD";
    case EnergyMethod::FCI:
      return "FCI";
  }
  return "?";
}

EnergyMethod parse_energy_method(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "HF") return EnergyMethod::HF;
  if (upper == "MP2") return EnergyMethod::MP2;
  if (upper == "CISD") return EnergyMethod::CISD;
  if (upper == "FCI") return EnergyMethod::FCI;
  fail(ErrorKind::Parse, "unknown energy method '" + std::string(text) + "' (HF, MP2, CISD, FCI)");
}

MethodEnergy method_energy(const hamiltonian::MOHamiltonian& ham, const Vector& orbital_energies,
                           EnergyMethod method, const CIOptions& ci, bool allow_fallback) {
  MethodEnergy out;
  out.requested = method;
  out.used = method;
  out.reference = hamiltonian::reference_energy(ham);
  if (method == EnergyMethod::CISD && allow_fallback &&
      count_determinants(ham.n_orb(), ham.n_elec, CILevel::CISD) > ci.max_cisd_determinants)
    out.used = EnergyMethod::MP2;
  switch (out.used) {
    case EnergyMethod::HF:
      out.total = out.reference;
      break;
    case EnergyMethod::MP2:
      out.total = out.reference + run_mp2(ham, orbital_energies).correlation_energy;
      break;
    case EnergyMethod::CISD:
      out.total = run_ci(ham, CILevel::CISD, ci).energy;
      break;
    case EnergyMethod::FCI:
      out.total = run_ci(ham, CILevel::FCI, ci).energy;
      break;
  }
  return out;
}

}  // namespace qpecost::correlation
