#include "helpers.hpp"

#include "qpecost/hamiltonian/fcidump.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>

using namespace qpecost;
using namespace testing;

namespace {

ErrorKind parse_kind(const std::string& text) {
  try {
    hamiltonian::parse_fcidump(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

bool identical(const hamiltonian::MOHamiltonian& a, const hamiltonian::MOHamiltonian& b) {
  return a.n_elec == b.n_elec && a.e_core == b.e_core && a.h == b.h && a.v.matrix() == b.v.matrix();
}

// The writer keeps one representative per symmetry class, so integrals that
// are symmetric only to rounding come back exactly symmetric.
double max_difference(const hamiltonian::MOHamiltonian& a, const hamiltonian::MOHamiltonian& b) {
  return std::max((a.h - b.h).cwiseAbs().maxCoeff(), (a.v.matrix() - b.v.matrix()).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("hand FCIDUMP fixture") {
  const auto ham = hamiltonian::read_fcidump(fixture_path("hand_1orb.fcidump"));
  CHECK(ham.n_orb() == 1);
  CHECK(ham.n_elec == 2);
  CHECK(ham.h(0, 0) == -1.25);
  CHECK(ham.v(0, 0, 0, 0) == 0.5);
  CHECK(ham.e_core == 0.0);
  // One doubly occupied orbital: 2h + (11|11).
  CHECK(hamiltonian::reference_energy(ham) == doctest::Approx(-2.0));
}

TEST_CASE("FCIDUMP dialect: slash terminator, D exponents, orbital-energy lines") {
  const auto ham = hamiltonian::read_fcidump(fixture_path("h2_sto3g.fcidump"));
  CHECK(ham.n_orb() == 2);
  CHECK(ham.v(1, 0, 1, 0) == doctest::Approx(0.18093119978423));
  CHECK(ham.v(0, 1, 1, 0) == doctest::Approx(0.18093119978423));
  CHECK(ham.v(1, 1, 0, 0) == doctest::Approx(0.66458173390979));
  CHECK(ham.e_core == doctest::Approx(0.71375318642204));
  CHECK(ham.h(0, 1) == 0.0);
}

TEST_CASE("FCIDUMP round trip is lossless") {
  std::mt19937 rng(7);
  for (const auto& ham : {system("h2o", "sto-3g").ham, system("lih", "sto-3g").ham, random_hamiltonian(5, 4, rng)}) {
    const auto back = hamiltonian::parse_fcidump(hamiltonian::format_fcidump(ham));
    CHECK(back.n_elec == ham.n_elec);
    CHECK(back.e_core == ham.e_core);
    CHECK(max_difference(back, ham) <= 2 * ham.v.max_asymmetry() + 1e-15);
    CHECK(identical(hamiltonian::parse_fcidump(hamiltonian::format_fcidump(back)), back));
  }
  const auto path = std::filesystem::temp_directory_path() / "qpecost_roundtrip.fcidump";
  hamiltonian::write_fcidump(system("h2", "sto-3g").ham, path);
  const auto& h2 = system("h2", "sto-3g").ham;
  CHECK(max_difference(hamiltonian::read_fcidump(path), h2) <= 2 * h2.v.max_asymmetry() + 1e-15);
  std::filesystem::remove(path);
}

TEST_CASE("malformed FCIDUMP input") {
  const std::string head = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n";
  CHECK(parse_kind("&FCI NORB=2,NELEC=2\n 1.0 1 1 1 1\n") == ErrorKind::Parse);
  CHECK(parse_kind("&FCI NELEC=2\n&END\n") == ErrorKind::Parse);
  CHECK(parse_kind(head + "1.0 3 1 1 1\n") == ErrorKind::Parse);
  CHECK(parse_kind(head + "1.0 1 1 1\n") == ErrorKind::Parse);
  CHECK(parse_kind(head + "abc 1 1 1 1\n") == ErrorKind::Parse);
  CHECK(parse_kind(head + "1.0 1 2 1 1\n2.0 2 1 1 1\n") == ErrorKind::Parse);
  CHECK(parse_kind("&FCI NORB=2,NELEC=2,MS2=2,\n&END\n") == ErrorKind::Input);
  // Identical duplicates are accepted.
  CHECK_NOTHROW(hamiltonian::parse_fcidump(head + "1.0 1 2 1 1\n1.0 2 1 1 1\n"));
  CHECK_THROWS_AS(hamiltonian::read_fcidump("/nonexistent/file"), Error);
}

TEST_CASE("freezing the core keeps the reference energy") {
  const auto& ham = system("h2o", "cc-pvdz").ham;
  const auto frozen = hamiltonian::restrict_orbitals(ham, {0}, {});
  CHECK(frozen.n_orb() == ham.n_orb() - 1);
  CHECK(frozen.n_elec == ham.n_elec - 2);
  CHECK(hamiltonian::reference_energy(frozen) == doctest::Approx(hamiltonian::reference_energy(ham)).epsilon(1e-12));
  const auto sliced = hamiltonian::restrict_orbitals(ham, {}, {22, 23});
  CHECK(sliced.n_orb() == 22);
  CHECK(hamiltonian::reference_energy(sliced) == doctest::Approx(hamiltonian::reference_energy(ham)).epsilon(1e-12));
  CHECK_THROWS_AS(hamiltonian::restrict_orbitals(ham, {7}, {}), Error);
  CHECK_THROWS_AS(hamiltonian::restrict_orbitals(ham, {}, {2}), Error);
  CHECK_THROWS_AS(hamiltonian::restrict_orbitals(ham, {0, 0}, {}), Error);
}

TEST_CASE("rotations inside the occupied space leave the determinant energy unchanged") {
  const auto& ham = system("h2o", "sto-3g").ham;
  std::mt19937 rng(3);
  Matrix u = Matrix::Identity(7, 7);
  u.topLeftCorner(5, 5) = random_orthogonal(5, rng);
  const auto rotated = hamiltonian::rotate(ham, u);
  CHECK(hamiltonian::reference_energy(rotated) == doctest::Approx(hamiltonian::reference_energy(ham)).epsilon(1e-12));
  CHECK_NOTHROW(rotated.validate(1e-10));
  auto broken = ham;
  broken.h(0, 1) += 1e-3;
  CHECK_THROWS_AS(broken.validate(1e-10), Error);
}

}
