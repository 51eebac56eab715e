#include "qpecost/chem/molecule.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qpecost::chem {

namespace {

constexpr std::array<std::string_view, 18> kElements = {
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F",
    "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"};

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    fail(ErrorKind::Parse, "xyz line " + std::to_string(line) + ": non-numeric coordinate '" +
                               std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

int atomic_number(std::string_view symbol) {
  for (std::size_t i = 0; i < kElements.size(); ++i)
    if (kElements[i] == symbol) return static_cast<int>(i) + 1;
  fail(ErrorKind::Parse, "unknown element symbol '" + std::string(symbol) + "'");
}

Molecule::Molecule(std::vector<Atom> atoms, int net_charge, int multiplicity)
    : atoms_(std::move(atoms)), net_charge_(net_charge), multiplicity_(multiplicity) {
  if (multiplicity_ < 1) fail(ErrorKind::Input, "spin multiplicity must be positive");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].charge < 1) fail(ErrorKind::Input, "nuclear charge must be >= 1");
    for (std::size_t j = 0; j < i; ++j)
      if ((atoms_[i].position - atoms_[j].position).norm() < 1e-8)
        fail(ErrorKind::Input, "atoms " + std::to_string(j) + " and " + std::to_string(i) +
                                   " share a position");
  }
  if (n_electrons() < 0 || n_electrons() % 2 != 0)
    fail(ErrorKind::Input, "electron count must be even and non-negative (restricted reference)");
}

int Molecule::n_electrons() const {
  int z = 0;
  for (const auto& a : atoms_) z += a.charge;
  return z - net_charge_;
}

double Molecule::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      e += atoms_[i].charge * atoms_[j].charge /
           (atoms_[i].position - atoms_[j].position).norm();
  return e;
}

Molecule Molecule::translated(const Vec3& shift) const {
  auto out = atoms_;
  for (auto& a : out) a.position += shift;
  return Molecule(std::move(out), net_charge_, multiplicity_);
}

Molecule Molecule::rotated(const Eigen::Matrix3d& rotation) const {
  auto out = atoms_;
  for (auto& a : out) a.position = rotation * a.position;
  return Molecule(std::move(out), net_charge_, multiplicity_);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t Molecule::hash() const {
  std::ostringstream os;
  os.precision(17);
  os << net_charge_ << ' ' << multiplicity_ << '\n';
  for (const auto& a : atoms_)
    os << a.symbol << ' ' << a.charge << ' ' << a.position.x() << ' ' << a.position.y() << ' '
       << a.position.z() << '\n';
  return fnv1a(os.str());
}

Molecule parse_xyz(std::string_view text, int net_charge) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && split_ws(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorKind::Parse, "xyz: empty input");

  auto count_tokens = split_ws(lines[0]);
  long count = -1;
  if (count_tokens.size() == 1) {
    auto [ptr, ec] = std::from_chars(count_tokens[0].data(),
                                     count_tokens[0].data() + count_tokens[0].size(), count);
    if (ec != std::errc() || ptr != count_tokens[0].data() + count_tokens[0].size()) count = -1;
  }
  if (count < 0) fail(ErrorKind::Parse, "xyz: malformed atom count header");
  if (lines.size() != static_cast<std::size_t>(count) + 2)
    fail(ErrorKind::Parse, "xyz: header claims " + std::to_string(count) + " atoms but " +
                               std::to_string(lines.size() > 2 ? lines.size() - 2 : 0) +
                               " atom lines follow");

  std::vector<Atom> atoms;
  for (long i = 0; i < count; ++i) {
    auto toks = split_ws(lines[i + 2]);
    if (toks.size() < 4)
      fail(ErrorKind::Parse, "xyz line " + std::to_string(i + 3) + ": expected element and 3 coordinates");
    Atom a;
    a.symbol = std::string(toks[0]);
    a.charge = atomic_number(a.symbol);
    for (int k = 0; k < 3; ++k)
      a.position[k] = parse_double(toks[k + 1], i + 3) * kAngstromToBohr;
    atoms.push_back(std::move(a));
  }
  return Molecule(std::move(atoms), net_charge);
}

Molecule load_geometry(const std::filesystem::path& path, int net_charge) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open geometry file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_xyz(ss.str(), net_charge);
}

Molecule diatomic(std::string_view a, std::string_view b, double bond_angstrom) {
  Atom x{std::string(a), atomic_number(a), Vec3::Zero()};
  Atom y{std::string(b), atomic_number(b), Vec3(0.0, 0.0, bond_angstrom * kAngstromToBohr)};
  return Molecule({x, y});
}

}  // namespace qpecost::chem
