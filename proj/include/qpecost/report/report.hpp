#pragma once

#include "qpecost/basisopt/optimize.hpp"
#include "qpecost/basisopt/scan.hpp"
#include "qpecost/basisopt/transfer.hpp"
#include "qpecost/fno/pipeline.hpp"
#include "qpecost/norms/double_factorization.hpp"
#include "qpecost/norms/resource.hpp"
#include "qpecost/norms/sparse_norm.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qpecost::report {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct Provenance {
  std::string geometry_hash;  // hex, empty for FCIDUMP input
  std::string basis_hash;
  std::string source;         // FCIDUMP path or basis name
  std::string code_version;
};

Provenance provenance(const chem::Molecule& mol, const chem::BasisSet& basis);
Provenance provenance(const std::string& fcidump_path, const std::string& content);
std::string hex(std::uint64_t v);

/// {schema_version, kind, provenance, payload}
json make_report(const std::string& kind, const Provenance& prov, json payload);

json to_json(const norms::NormReport& r);
json to_json(const norms::DFFactorization& df);
json to_json(const norms::ResourceEstimate& r);
json to_json(const fno::FnoReport& r);
json to_json(const basisopt::OptimizationResult& r);
json to_json(const basisopt::ScanTable& t);
json to_json(const basisopt::ScalingFit& f);
json to_json(const std::vector<fno::ScanRow>& rows);
json to_json(const std::vector<basisopt::TransferRow>& rows);

/// Problems found in a report; empty when it conforms to the schema.
std::vector<std::string> validate_report(const json& report);

/// Two-space indented JSON with a trailing newline.
std::string dump(const json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double v);
std::string format_csv(const CsvTable& t);

CsvTable dissociation_csv(const std::vector<fno::ScanRow>& rows);
CsvTable scan_csv(const basisopt::ScanTable& t);
CsvTable scaling_csv(const basisopt::ScalingFit& f);
CsvTable trace_csv(const basisopt::OptimizationTrace& t);
CsvTable transfer_csv(const std::vector<basisopt::TransferRow>& rows);

/// Writes through a temporary file and a rename.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace qpecost::report
