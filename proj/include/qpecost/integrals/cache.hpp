#pragma once

#include "qpecost/integrals/engine.hpp"

#include <filesystem>
#include <optional>

namespace qpecost::integrals {

/// Binary integral cache. File layout (all little-endian):
///
///   char[8]  magic "QPEINT01"
///   u32      format version (1)
///   u32      n_ao
///   u64      geometry hash
///   u64      basis hash
///   f64      nuclear repulsion
///   f64[n*n] overlap, kinetic, nuclear (row-major, in that order)
///   f64[n^4] ERI (pq|rs), row-major over p,q,r,s
///
/// Files are named `<geometry hash>-<basis hash>.qpeint` in hex.
std::filesystem::path cache_path(const std::filesystem::path& dir, const chem::Molecule& mol,
                                 const chem::BasisSet& basis);

void write_cache(const std::filesystem::path& file, const IntegralSet& ints, std::uint64_t geometry_hash,
                 std::uint64_t basis_hash);

/// Returns nullopt if the file is missing or carries different hashes;
/// throws on a corrupt file.
std::optional<IntegralSet> read_cache(const std::filesystem::path& file, std::uint64_t geometry_hash,
                                      std::uint64_t basis_hash);

/// compute_integrals with a lookup in `dir` first; an empty `dir` disables caching.
IntegralSet cached_integrals(const chem::Molecule& mol, const chem::BasisSet& basis,
                             const std::filesystem::path& dir, const IntegralOptions& opts = {});

}  // namespace qpecost::integrals
