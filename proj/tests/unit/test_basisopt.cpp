#include "helpers.hpp"

#include "qpecost/basisopt/augment.hpp"
#include "qpecost/basisopt/cost.hpp"
#include "qpecost/basisopt/optimize.hpp"
#include "qpecost/basisopt/scan.hpp"
#include "qpecost/basisopt/simplex.hpp"
#include "qpecost/basisopt/transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace qpecost;
using namespace testing;
using correlation::EnergyMethod;

namespace {

basisopt::OptimizationConfig water_config(double gamma) {
  const auto aug = basisopt::init_augmented(basis("cc-pvdz"), basis("ano-pvdz"), "O", 2);
  basisopt::OptimizationConfig cfg;
  cfg.molecule = geometry("h2o");
  cfg.basis = aug.basis;
  cfg.start = aug.parameters;
  cfg.gamma = gamma;
  cfg.method = EnergyMethod::MP2;
  return cfg;
}

}  // namespace

TEST_SUITE("basisopt") {

TEST_CASE("carbon d-shell initialization from the donor set") {
  const auto aug = basisopt::init_augmented(basis("cc-pvdz"), basis("ano-pvdz"), "C", 2);
  const auto& shells = aug.basis.shells("C");
  const auto& d = shells[aug.shell];
  REQUIRE(d.l() == 2);
  const std::vector<double> expected = {4.5420, 1.9790, 0.8621, 0.5500, 0.1636};
  REQUIRE(d.n_primitives() == 5);
  for (int i = 0; i < 5; ++i) CHECK(d.exponents()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  REQUIRE(d.n_contracted() == 1);
  for (int i = 0; i < 5; ++i) CHECK(d.coefficients()(i, 0) == (i == 3 ? 1.0 : 0.0));
  REQUIRE(aug.replaced.size() == 1);
  CHECK(aug.replaced[0] == doctest::Approx(0.3756));
  CHECK(aug.parameters.size() == 10);
  CHECK(aug.basis.name() == "cc-pvdz+aug");
  // Other shells and elements are untouched.
  CHECK(aug.basis.shells("H") == basis("cc-pvdz").shells("H"));
  CHECK(shells.size() == basis("cc-pvdz").shells("C").size());
}

TEST_CASE("augmentation merges several base shells") {
  const auto& cc = basis("cc-pvdz").shells("O");
  const auto& donor = basis("ano-pvdz").shells("O");
  const auto merged = basisopt::augmented_shell({cc[0]}, donor[0]);
  CHECK(merged.n_contracted() == cc[0].n_contracted());
  CHECK(merged.n_primitives() == donor[0].n_primitives());
  // Every base exponent appears in the merged shell.
  for (double a : cc[0].exponents()) {
    bool found = false;
    for (double b : merged.exponents()) found |= a == b;
    CHECK(found);
  }
}

TEST_CASE("augmented start reproduces the base basis") {
  auto cfg = water_config(0.0);
  const auto base = [&] {
    auto c = cfg;
    c.basis = basis("cc-pvdz");
    c.start = chem::read_parameters(c.basis, {});
    return basisopt::evaluate_cost(c.start, c);
  }();
  const auto start = basisopt::evaluate_cost(cfg.start, cfg);
  REQUIRE(start.ok);
  REQUIRE(base.ok);
  CHECK(std::abs(start.energy - base.energy) <= 1e-9);
  CHECK(std::abs(start.lambda - base.lambda) <= 1e-8);
  CHECK(start.energy == doctest::Approx(-76.02677086873653 - 0.2040052231759979).epsilon(1e-8));
}

TEST_CASE("cost endpoints, linearity and determinism") {
  const auto at0 = basisopt::evaluate_cost(water_config(0.0).start, water_config(0.0));
  const auto at1 = basisopt::evaluate_cost(water_config(1.0).start, water_config(1.0));
  CHECK(at0.g == at0.energy);
  CHECK(at1.g == at1.lambda);
  for (double gamma : {0.1, 0.37}) {
    const auto cfg = water_config(gamma);
    const auto c = basisopt::evaluate_cost(cfg.start, cfg);
    CHECK(c.g == doctest::Approx((1 - gamma) * c.energy + gamma * c.lambda).epsilon(1e-14));
    const auto again = basisopt::evaluate_cost(cfg.start, cfg);
    CHECK(again.g == c.g);
  }
  CHECK(basisopt::gamma_from_reference(0.1, 200.0) == doctest::Approx(5e-4));
  CHECK_THROWS_AS(basisopt::gamma_from_reference(0.1, 0.0), Error);
  // Worked example: E = -100.2, lambda = 500, gamma = 0.1 / 500.
  const double gamma = basisopt::gamma_from_reference(0.1, 500.0);
  CHECK((1 - gamma) * -100.2 + gamma * 500.0 == doctest::Approx(-100.07996));
}

TEST_CASE("cost rejects invalid configurations and points") {
  auto cfg = water_config(0.1);
  cfg.gamma = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = water_config(0.1);
  cfg.method = EnergyMethod::HF;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = water_config(0.1);
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);

  cfg = water_config(0.1);
  auto theta = cfg.start;
  // Two identical exponents make the contracted shell singular.
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta.mask[i].kind == chem::SlotKind::Exponent) theta.values[i] = 0.0;
  const auto bad = basisopt::evaluate_cost(theta, cfg);
  CHECK_FALSE(bad.ok);
  CHECK(std::isinf(bad.g));
  CHECK_FALSE(bad.diagnostic.empty());
}

TEST_CASE("Nelder-Mead on a quadratic") {
  const Vector center = (Vector(3) << 1.0, -2.0, 0.5).finished();
  auto f = [&](const Vector& x) { return (x - center).cwiseAbs2().dot(Vector::LinSpaced(3, 1.0, 3.0)); };
  basisopt::SimplexOptions opts;
  opts.max_iter = 500;
  const auto r = basisopt::nelder_mead(f, Vector::Zero(3), Vector::Constant(3, 0.5), opts);
  CHECK((r.best.x - center).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK(r.trace.size() <= 501);
  CHECK(r.trace.front().x == Vector::Zero(3));
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].f <= r.trace[i - 1].f);
  CHECK(r.best.f == r.trace.back().f);

  const auto stay = basisopt::nelder_mead(f, center, Vector::Constant(3, 0.1), opts);
  CHECK(stay.best.x == center);
  CHECK(stay.best.f == 0.0);

  opts.max_iter = 5;
  const auto capped = basisopt::nelder_mead(f, Vector::Zero(3), Vector::Constant(3, 0.5), opts);
  CHECK(capped.trace.size() <= 6);
}

TEST_CASE("Nelder-Mead treats non-finite values as infinitely bad") {
  auto f = [](const Vector& x) {
    if (x(0) < 0) return std::numeric_limits<double>::infinity();
    return (x(0) - 1) * (x(0) - 1) + x(1) * x(1);
  };
  basisopt::SimplexOptions opts;
  opts.max_iter = 300;
  // The first edge steps into the rejected half-plane.
  const auto r = basisopt::nelder_mead(f, (Vector(2) << 0.1, 0.3).finished(), (Vector(2) << -0.5, 0.5).finished(), opts);
  CHECK(r.rejected > 0);
  CHECK(std::abs(r.best.x(0) - 1) <= 1e-3);
  CHECK(std::isfinite(r.best.f));
}

TEST_CASE("basis optimization trace") {
  const auto aug = basisopt::init_augmented(basis("cc-pvdz"), basis("ano-pvdz"), "H", 1);
  basisopt::OptimizationConfig cfg;
  cfg.molecule = geometry("h2");
  cfg.basis = aug.basis;
  cfg.start = aug.parameters;
  cfg.method = EnergyMethod::CISD;
  cfg.max_iter = 6;
  const auto lambda_ref = basisopt::evaluate_cost(cfg.start, cfg).lambda;
  cfg.gamma = basisopt::gamma_from_reference(0.1, lambda_ref);
  const auto r = basisopt::optimize_basis(cfg);
  const auto& pts = r.trace.points;
  REQUIRE_FALSE(pts.empty());
  CHECK(pts.size() <= std::size_t(cfg.max_iter + 1));
  CHECK(pts.front().g == doctest::Approx(r.initial.g).epsilon(1e-14));
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].g <= pts[i - 1].g);
  double lowest = pts.front().g;
  for (const auto& p : pts) {
    lowest = std::min(lowest, p.g);
    CHECK(p.g == doctest::Approx((1 - cfg.gamma) * p.energy + cfg.gamma * p.lambda).epsilon(1e-14));
  }
  CHECK(r.best.g == lowest);
  CHECK(r.best.g <= r.initial.g);
  CHECK(pts[r.trace.best].g == r.best.g);
  const auto check = basisopt::evaluate_cost(r.parameters, cfg);
  CHECK(check.g == r.best.g);

  const auto again = basisopt::optimize_basis(cfg);
  REQUIRE(again.trace.points.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(again.trace.points[i].theta == pts[i].theta);
}

TEST_CASE("augmented-primitive scan") {
  const auto grid = basisopt::log_grid(0.1, 10.0, 5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid.back() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] / grid[i - 1] == doctest::Approx(std::sqrt(10.0)));

  const auto table = basisopt::scan_augmented_primitive(geometry("h2"), basis("sto-3g"), "H", 0, grid);
  REQUIRE(table.points.size() == grid.size());
  const auto& base = table.unaugmented;
  CHECK(base.ok);
  CHECK(base.n_orb == 2);
  CHECK(base.e_fci == doctest::Approx(-1.1372701754095254).epsilon(1e-8));
  CHECK(base.lambda_df == doctest::Approx(1.6551464124612716).epsilon(1e-8));
  for (const auto& p : table.points) {
    CAPTURE(p.exponent);
    REQUIRE(p.ok);
    CHECK(p.n_orb == 4);
    CHECK(p.e_hf <= base.e_hf + 1e-10);
    CHECK(p.e_fci <= base.e_fci + 1e-10);
    CHECK(p.lambda_df >= base.lambda_df - 1e-10);
    CHECK(p.lambda_sparse >= base.lambda_sparse - 1e-10);
  }
  CHECK_THROWS_AS(basisopt::scan_augmented_primitive(geometry("h2"), basis("sto-3g"), "H", 2, grid), Error);
}

TEST_CASE("duplicate exponent is flagged as linearly dependent") {
  basisopt::ScanOptions opts;
  opts.with_fci = false;
  const auto table = basisopt::scan_augmented_primitive(geometry("h2o"), basis("cc-pvdz"), "O", 0, {0.3023, 0.05}, opts);
  CHECK(table.points[0].linear_dependent);
  CHECK_FALSE(table.points[0].ok);
  CHECK(table.points[0].min_overlap_eigenvalue < 1e-8);
  CHECK_FALSE(table.points[1].linear_dependent);
  CHECK(table.points[1].ok);
}

TEST_CASE("norm scaling fit") {
  const auto fit = basisopt::lambda_scaling(geometry("h2o"), {basis("sto-3g"), basis("cc-pvdz")});
  REQUIRE(fit.points.size() == 2);
  const auto& a = fit.points[0];
  const auto& b = fit.points[1];
  CHECK(a.n_orb == 7);
  CHECK(b.n_orb == 24);
  CHECK(a.lambda_df == doctest::Approx(53.92267341378691).epsilon(1e-8));
  const double slope = std::log(b.lambda_df / a.lambda_df) / std::log(double(b.n_orb) / a.n_orb);
  CHECK(fit.exponent == doctest::Approx(slope).epsilon(1e-10));
  CHECK(fit.prefactor * std::pow(a.n_orb, fit.exponent) == doctest::Approx(a.lambda_df).epsilon(1e-10));
}

TEST_CASE("transfer against the same basis is a no-op") {
  basisopt::TransferOptions opts;
  opts.methods = {EnergyMethod::HF, EnergyMethod::MP2};
  const auto rows = basisopt::transfer_evaluate(basis("cc-pvdz"), {{"h2o", geometry("h2o")}, {"lih", geometry("lih")}},
                                                basis("cc-pvdz"), opts);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CAPTURE(row.name);
    CHECK(row.ok);
    CHECK(row.improvement_percent == 0.0);
    CHECK(row.lambda_reference == row.lambda_optimized);
    for (const auto& [tag, d] : row.delta) CHECK(d == 0.0);
    CHECK(row.delta.count("MP2") == 1);
  }
  CHECK(rows[0].e_reference.at("HF") == doctest::Approx(-76.02677086873653).epsilon(1e-8));

  opts.max_orbitals = 10;
  const auto skipped = basisopt::transfer_evaluate(basis("cc-pvdz"), {{"h2o", geometry("h2o")}}, basis("cc-pvdz"), opts);
  CHECK_FALSE(skipped[0].ok);
}

}
