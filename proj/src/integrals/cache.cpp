#include "qpecost/integrals/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace qpecost::integrals {

namespace {

constexpr char kMagic[8] = {'Q', 'P', 'E', 'I', 'N', 'T', '0', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::filesystem::path& file) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    fail(ErrorKind::Io, "integral cache " + file.string() + " is truncated");
  return to_little(v);
}

void put_matrix(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) put(os, m(i, j));
}

Matrix get_matrix(std::istream& is, Eigen::Index rows, Eigen::Index cols, const std::filesystem::path& file) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get<double>(is, file);
  return m;
}

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, const chem::Molecule& mol,
                                 const chem::BasisSet& basis) {
  std::ostringstream name;
  name << std::hex << mol.hash() << '-' << basis.hash() << ".qpeint";
  return dir / name.str();
}

void write_cache(const std::filesystem::path& file, const IntegralSet& ints, std::uint64_t geometry_hash,
                 std::uint64_t basis_hash) {
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write integral cache " + tmp.string());
    os.write(kMagic, sizeof(kMagic));
    put(os, kVersion);
    put(os, static_cast<std::uint32_t>(ints.n_ao));
    put(os, geometry_hash);
    put(os, basis_hash);
    put(os, ints.e_nuc);
    put_matrix(os, ints.overlap);
    put_matrix(os, ints.kinetic);
    put_matrix(os, ints.nuclear);
    put_matrix(os, ints.eri.matrix());
    if (!os) fail(ErrorKind::Io, "failed while writing integral cache " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) fail(ErrorKind::Io, "cannot move integral cache into place: " + ec.message());
}

std::optional<IntegralSet> read_cache(const std::filesystem::path& file, std::uint64_t geometry_hash,
                                      std::uint64_t basis_hash) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(ErrorKind::Io, "integral cache " + file.string() + " has a bad magic number");
  if (get<std::uint32_t>(is, file) != kVersion)
    fail(ErrorKind::Io, "integral cache " + file.string() + " has an unsupported version");
  const auto n = static_cast<Eigen::Index>(get<std::uint32_t>(is, file));
  if (get<std::uint64_t>(is, file) != geometry_hash || get<std::uint64_t>(is, file) != basis_hash)
    return std::nullopt;
  IntegralSet out;
  out.n_ao = static_cast<int>(n);
  out.e_nuc = get<double>(is, file);
  out.overlap = get_matrix(is, n, n, file);
  out.kinetic = get_matrix(is, n, n, file);
  out.nuclear = get_matrix(is, n, n, file);
  out.eri = EriTensor(static_cast<int>(n), get_matrix(is, n * n, n * n, file));
  return out;
}

IntegralSet cached_integrals(const chem::Molecule& mol, const chem::BasisSet& basis,
                             const std::filesystem::path& dir, const IntegralOptions& opts) {
  if (dir.empty()) return compute_integrals(mol, basis, opts);
  const auto file = cache_path(dir, mol, basis);
  if (auto hit = read_cache(file, mol.hash(), basis.hash())) return std::move(*hit);
  IntegralSet ints = compute_integrals(mol, basis, opts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create cache directory " + dir.string());
  write_cache(file, ints, mol.hash(), basis.hash());
  return ints;
}

}  // namespace qpecost::integrals
