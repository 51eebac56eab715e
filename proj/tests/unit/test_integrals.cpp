#include "helpers.hpp"

#include "qpecost/integrals/boys.hpp"
#include "qpecost/integrals/cache.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace qpecost;
using namespace testing;

namespace {

// Composite Simpson on int_0^1 t^{2m} exp(-x t^2) dt.
double boys_quadrature(int m, double x) {
  const int n = 20000;
  const double h = 1.0 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::pow(t, 2 * m) * std::exp(-x * t * t);
  }
  return s * h / 3.0;
}

// Closed-form s-type primitive integrals for normalized primitives.
struct Prim {
  double a;
  Vec3 c;
};

double norm_s(double a) { return std::pow(2.0 * a / std::numbers::pi, 0.75); }

double s_overlap(const Prim& p, const Prim& q) {
  const double g = p.a + q.a;
  return norm_s(p.a) * norm_s(q.a) * std::pow(std::numbers::pi / g, 1.5) *
         std::exp(-p.a * q.a / g * (p.c - q.c).squaredNorm());
}

double f0(double t) { return t < 1e-12 ? 1.0 : 0.5 * std::sqrt(std::numbers::pi / t) * std::erf(std::sqrt(t)); }

double s_eri(const Prim& a, const Prim& b, const Prim& c, const Prim& d) {
  const double p = a.a + b.a, q = c.a + d.a;
  const Vec3 pc = (a.a * a.c + b.a * b.c) / p, qc = (c.a * c.c + d.a * d.c) / q;
  const double kab = std::exp(-a.a * b.a / p * (a.c - b.c).squaredNorm());
  const double kcd = std::exp(-c.a * d.a / q * (c.c - d.c).squaredNorm());
  return norm_s(a.a) * norm_s(b.a) * norm_s(c.a) * norm_s(d.a) * 2.0 * std::pow(std::numbers::pi, 2.5) /
         (p * q * std::sqrt(p + q)) * kab * kcd * f0(p * q / (p + q) * (pc - qc).squaredNorm());
}

}  // namespace

TEST_SUITE("integrals") {

TEST_CASE("Boys function against quadrature") {
  for (int m : {0, 1, 3, 6, 12})
    for (double x : {0.0, 1e-3, 0.7, 5.0, 17.3, 34.9, 36.0, 80.0}) {
      const double ref = boys_quadrature(m, x);
      CHECK(integrals::boys(m, x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("H2 STO-3G contracted s integrals against closed forms") {
  const auto mol = chem::parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7414\n");
  const auto& sh = basis("sto-3g").shells("H").front();
  const auto ints = integrals::compute_integrals(mol, basis("sto-3g"));
  REQUIRE(ints.n_ao == 2);
  auto contracted = [&](int atom) {
    std::vector<std::pair<double, Prim>> out;
    for (int i = 0; i < sh.n_primitives(); ++i)
      out.push_back({sh.coefficients()(i, 0), Prim{sh.exponents()[static_cast<std::size_t>(i)],
                                                    mol.atoms()[static_cast<std::size_t>(atom)].position}});
    return out;
  };
  const auto f1 = contracted(0), f2 = contracted(1);
  auto ov = [](const auto& x, const auto& y) {
    double s = 0;
    for (const auto& [cx, px] : x)
      for (const auto& [cy, py] : y) s += cx * cy * s_overlap(px, py);
    return s;
  };
  const double n1 = 1.0 / std::sqrt(ov(f1, f1));
  CHECK(ints.overlap(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ints.overlap(0, 1) == doctest::Approx(n1 * n1 * ov(f1, f2)).epsilon(1e-12));
  double e1111 = 0, e1122 = 0, e1212 = 0;
  for (const auto& [ca, pa] : f1)
    for (const auto& [cb, pb] : f1)
      for (const auto& [cc, pc] : f1)
        for (const auto& [cd, pd] : f1) e1111 += ca * cb * cc * cd * s_eri(pa, pb, pc, pd);
  for (const auto& [ca, pa] : f1)
    for (const auto& [cb, pb] : f1)
      for (const auto& [cc, pc] : f2)
        for (const auto& [cd, pd] : f2) e1122 += ca * cb * cc * cd * s_eri(pa, pb, pc, pd);
  for (const auto& [ca, pa] : f1)
    for (const auto& [cb, pb] : f2)
      for (const auto& [cc, pc] : f1)
        for (const auto& [cd, pd] : f2) e1212 += ca * cb * cc * cd * s_eri(pa, pb, pc, pd);
  const double n4 = std::pow(n1, 4);
  CHECK(ints.eri(0, 0, 0, 0) == doctest::Approx(n4 * e1111).epsilon(1e-12));
  CHECK(ints.eri(0, 0, 1, 1) == doctest::Approx(n4 * e1122).epsilon(1e-12));
  CHECK(ints.eri(0, 1, 0, 1) == doctest::Approx(n4 * e1212).epsilon(1e-12));
  // Textbook values at R = 1.4 bohr are close to this geometry's.
  CHECK(ints.overlap(0, 1) == doctest::Approx(0.6593).epsilon(2e-2));
  CHECK(ints.eri(0, 0, 0, 0) == doctest::Approx(0.7746).epsilon(1e-3));
}

TEST_CASE("RHF energies against an external reference program") {
  // Frozen from an independent implementation on the shipped geometries and bases.
  struct Row {
    const char* geom;
    const char* basis;
    double energy;
  };
  for (const auto& r : {Row{"h2", "sto-3g", -1.1166843901187489}, Row{"h2o", "sto-3g", -74.96302656038152},
                        Row{"h2o", "cc-pvdz", -76.02677086873653}, Row{"hf", "cc-pvtz", -100.05802063801005},
                        Row{"n2", "cc-pvtz", -108.98347032119325}}) {
    CAPTURE(r.geom);
    CAPTURE(r.basis);
    CHECK(std::abs(system(r.geom, r.basis).scf.energy - r.energy) < 1e-8);
  }
}

TEST_CASE("ERI symmetry and positive semidefiniteness") {
  for (const char* b : {"sto-3g", "cc-pvdz"}) {
    const auto& s = system("h2o", b);
    CHECK(s.ints.eri.max_asymmetry() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.ints.eri.matrix(), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("energy is invariant under rigid motion") {
  const auto mol = geometry("nh3");
  const double e0 = system("nh3", "cc-pvdz").scf.energy;
  const Eigen::Matrix3d rot = (Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized())).toRotationMatrix();
  for (const auto& moved : {mol.translated(Vec3(1.3, -0.4, 2.2)), mol.rotated(rot)}) {
    const auto ints = integrals::compute_integrals(moved, basis("cc-pvdz"));
    CHECK(std::abs(scf::run_rhf(ints, moved.n_electrons()).energy - e0) <= 1e-8);
  }
  // f functions exercise every solid harmonic.
  const auto hf = geometry("hf");
  const double e1 = system("hf", "cc-pvtz").scf.energy;
  const auto ints = integrals::compute_integrals(hf.rotated(rot), basis("cc-pvtz"));
  CHECK(std::abs(scf::run_rhf(ints, hf.n_electrons()).energy - e1) <= 1e-8);
}

TEST_CASE("threaded integrals are identical to serial") {
  const auto mol = geometry("h2o");
  integrals::IntegralOptions o;
  o.jobs = 3;
  const auto a = integrals::compute_integrals(mol, basis("cc-pvdz"), o);
  const auto& b = system("h2o", "cc-pvdz").ints;
  CHECK((a.eri.matrix() - b.eri.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("integral cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "qpecost_cache_test";
  std::filesystem::remove_all(dir);
  const auto mol = geometry("h2o");
  const auto& b = basis("sto-3g");
  const auto first = integrals::cached_integrals(mol, b, dir);
  const auto file = integrals::cache_path(dir, mol, b);
  REQUIRE(std::filesystem::exists(file));
  const auto again = integrals::read_cache(file, mol.hash(), b.hash());
  REQUIRE(again.has_value());
  CHECK(again->eri.matrix() == first.eri.matrix());
  CHECK(again->kinetic == first.kinetic);
  CHECK(again->e_nuc == first.e_nuc);
  CHECK_FALSE(integrals::read_cache(file, mol.hash() + 1, b.hash()).has_value());
  std::filesystem::resize_file(file, 40);
  CHECK_THROWS_AS(integrals::read_cache(file, mol.hash(), b.hash()), Error);
  std::filesystem::remove_all(dir);
}

}
