#include "helpers.hpp"

#include "qpecost/correlation/ci.hpp"
#include "qpecost/norms/double_factorization.hpp"
#include "qpecost/norms/jw_oracle.hpp"
#include "qpecost/norms/resource.hpp"
#include "qpecost/norms/sparse_norm.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

using namespace qpecost;
using namespace testing;

namespace {

hamiltonian::MOHamiltonian one_orbital(double h, double v, double core = 0.0) {
  hamiltonian::MOHamiltonian ham;
  ham.n_elec = 2;
  ham.e_core = core;
  ham.h = Matrix::Constant(1, 1, h);
  ham.v = EriTensor(1);
  ham.v(0, 0, 0, 0) = v;
  return ham;
}

}  // namespace

TEST_SUITE("norms") {

TEST_CASE("sparse norm hand cases") {
  const auto zero = norms::sparse_norm(one_orbital(0.0, 0.0));
  CHECK(zero.total() == 0.0);
  const double a = -1.25, v = 0.5;
  const auto r = norms::sparse_norm(one_orbital(a, v));
  CHECK(r.constant == doctest::Approx(std::abs(a + v / 4)));
  CHECK(r.one_body == doctest::Approx(std::abs(a + v / 2)));
  CHECK(r.two_body == doctest::Approx(v / 4));
  CHECK(r.total() == doctest::Approx(r.constant + r.one_body + r.two_body));
  CHECK(r.effective() == doctest::Approx(r.one_body + r.two_body));
}

TEST_CASE("Jordan-Wigner identity-only Hamiltonian") {
  const auto o = norms::jw_oracle_norm(one_orbital(0.0, 0.0, 2.5));
  CHECK(o.n_terms == 1);
  CHECK(o.with_identity == doctest::Approx(2.5));
  CHECK(o.without_identity == 0.0);
}

TEST_CASE("H2 minimal basis Pauli expansion") {
  const auto& ham = system("h2", "sto-3g").ham;
  const auto pauli = norms::jordan_wigner(ham);
  const auto o = norms::jw_oracle_norm(ham);
  // I, four Z, six ZZ and four XXYY-type strings.
  CHECK(o.n_terms == 15);
  CHECK(o.n_non_identity_terms == 14);
  // Pauli-basis trace projection of the explicit 16x16 Hamiltonian matrix.
  CHECK(o.without_identity == doctest::Approx(1.8850504928513105).epsilon(1e-6));
  int zz = 0, xy = 0;
  for (const auto& [p, c] : pauli.terms) {
    if (p.x == 0 && std::popcount(p.z) == 2) ++zz;
    if (std::popcount(p.x) == 4) ++xy;
  }
  CHECK(zz == 6);
  CHECK(xy == 4);
}

TEST_CASE("sparse norm equals the explicit Pauli norm") {
  for (const char* g : {"h2", "h4_chain", "lih", "h2o"}) {
    CAPTURE(g);
    const auto& ham = system(g, "sto-3g").ham;
    const auto s = norms::sparse_norm(ham);
    const auto o = norms::jw_oracle_norm(ham);
    CHECK(std::abs(s.effective() - o.without_identity) <= 1e-10);
    CHECK(std::abs(s.total() - o.with_identity) <= 1e-10);
  }
  std::mt19937 rng(11);
  for (int n = 1; n <= 4; ++n) {
    const auto ham = random_hamiltonian(n, 2, rng);
    const auto s = norms::sparse_norm(ham);
    const auto o = norms::jw_oracle_norm(ham);
    CHECK(std::abs(s.effective() - o.without_identity) <= 1e-10);
    CHECK(std::abs(s.total() - o.with_identity) <= 1e-10);
  }
  hamiltonian::MOHamiltonian big;
  big.n_elec = 2;
  big.h = Matrix::Zero(9, 9);
  big.v = EriTensor(9);
  CHECK_THROWS_AS(norms::jw_oracle_norm(big), Error);
}

TEST_CASE("double factorization hand case") {
  const auto df = norms::df_factorize(one_orbital(0.0, 4.0), 1);
  REQUIRE(df.leaves.size() == 1);
  CHECK(std::abs(df.leaves[0].weights[0]) == doctest::Approx(2.0));
  CHECK(df.one_body_weights[0] == doctest::Approx(2.0));
  CHECK(df.lambda() == doctest::Approx(3.0));
  CHECK_THROWS_AS(norms::df_factorize(one_orbital(0.0, 4.0), 2), Error);
  CHECK_THROWS_AS(norms::df_factorize(one_orbital(0.0, 4.0), 0), Error);
  CHECK_THROWS_AS(norms::df_factorize(one_orbital(0.0, -4.0), 1), Error);
}

TEST_CASE("lambda_DF against an independent implementation") {
  // Frozen from a separate eigendecomposition-based script on the same integrals.
  const auto& h2 = system("h2", "sto-3g").ham;
  CHECK(norms::df_factorize(h2, 4).lambda() == doctest::Approx(1.6551464124612716).epsilon(1e-10));
  const auto& h2o = system("h2o", "sto-3g").ham;
  CHECK(norms::df_factorize(h2o, 35).lambda() == doctest::Approx(53.92267341378691).epsilon(1e-10));
  CHECK(norms::df_factorize(h2o, 49).lambda() == doctest::Approx(53.92267341378691).epsilon(1e-10));
}

TEST_CASE("factorization structure, exactness and convergence") {
  for (const char* g : {"h2o", "lih", "h4_chain"}) {
    CAPTURE(g);
    const auto& ham = system(g, "sto-3g").ham;
    const int n = ham.n_orb();
    const auto full = norms::df_factorize(ham, n * n);
    CHECK(full.reconstruction_error <= 1e-8);
    const Matrix approx = norms::reconstruct(full, n);
    CHECK((approx - ham.v.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
    for (const auto& leaf : full.leaves)
      CHECK((leaf.vectors.transpose() * leaf.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    double previous = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= n * n; ++r) {
      const double err = norms::df_factorize(ham, r).reconstruction_error;
      CHECK(err <= previous + 1e-12);
      previous = err;
    }
    const double l7 = norms::df_factorize(ham, std::min(7 * n, n * n)).lambda();
    CHECK(std::abs(l7 - full.lambda()) <= 5e-3);
  }
}

TEST_CASE("dense and Cholesky routes agree") {
  const auto& ham = system("h2o", "sto-3g").ham;
  norms::DFOptions chol;
  chol.dense_max_orbitals = 0;
  for (int r : {7, 20, 35}) {
    const auto a = norms::df_factorize(ham, r);
    const auto b = norms::df_factorize(ham, r, chol);
    CHECK_FALSE(b.dense_route);
    CHECK(a.lambda() == doctest::Approx(b.lambda()).epsilon(1e-9));
    CHECK(std::abs(a.reconstruction_error - b.reconstruction_error) <= 1e-9);
  }
}

TEST_CASE("DF-truncated Hamiltonian reproduces the FCI energy") {
  for (const char* g : {"h2", "h4_chain", "lih"}) {
    CAPTURE(g);
    const auto& ham = system(g, "sto-3g").ham;
    const int n = ham.n_orb();
    auto approx = ham;
    approx.v = EriTensor(n, norms::reconstruct(norms::df_factorize(ham, std::min(5 * n, n * n)), n));
    const double exact = correlation::run_ci(ham, correlation::CILevel::FCI).energy;
    CHECK(std::abs(correlation::run_ci(approx, correlation::CILevel::FCI).energy - exact) <= 2e-3);
  }
}

TEST_CASE("resource estimate arithmetic") {
  const auto one = norms::resource_estimate(1.0, std::numbers::pi / 2, 2, 4);
  CHECK(one.walk_calls == 1);
  CHECK(one.block_encoding_cost == 8);
  const auto ch4 = norms::resource_estimate(543.5, 1.6e-3, 34, 170);
  CHECK(ch4.walk_calls == static_cast<std::uint64_t>(std::ceil(std::numbers::pi * 543.5 / 3.2e-3)));
  const auto twice = norms::resource_estimate(2 * 543.5, 1.6e-3, 34, 170);
  CHECK(twice.walk_calls >= 2 * ch4.walk_calls - 1);
  CHECK(twice.walk_calls <= 2 * ch4.walk_calls);
  CHECK(norms::resource_estimate(543.5, 0.8e-3, 34, 170).walk_calls > ch4.walk_calls);
  CHECK_THROWS_AS(norms::resource_estimate(0.0, 1e-3, 1, 1), Error);
  CHECK_THROWS_AS(norms::resource_estimate(1.0, -1e-3, 1, 1), Error);
}

}
