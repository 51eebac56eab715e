#pragma once

#include "qpecost/hamiltonian/mo_hamiltonian.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qpecost::hamiltonian {

/// FCIDUMP text: `&FCI NORB=, NELEC=, MS2=0` namelist header, then
/// `value i j k l` lines (1-based, chemist notation). One-body entries use
/// k = l = 0 and the core energy sits on the all-zero line.
MOHamiltonian parse_fcidump(std::string_view text);
MOHamiltonian read_fcidump(const std::filesystem::path& path);

std::string format_fcidump(const MOHamiltonian& ham, double threshold = 0.0);
void write_fcidump(const MOHamiltonian& ham, const std::filesystem::path& path, double threshold = 0.0);

}  // namespace qpecost::hamiltonian
