#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/molecule.hpp"
#include "qpecost/tensor.hpp"

#include <vector>

namespace qpecost::integrals {

inline constexpr int kMaxAngularMomentum = 3;

/// One contracted spherical shell placed on an atom. `coefficients` already
/// include primitive radial normalization; zero-weight primitives are dropped.
struct Shell {
  int l = 0;
  int atom = 0;
  int offset = 0;  // index of the first AO
  Vec3 center = Vec3::Zero();
  std::vector<double> exponents;
  std::vector<double> coefficients;

  int size() const { return 2 * l + 1; }
};

std::vector<Shell> build_shells(const chem::Molecule& mol, const chem::BasisSet& basis);

struct IntegralSet {
  int n_ao = 0;
  Matrix overlap;
  Matrix kinetic;
  Matrix nuclear;
  EriTensor eri;
  double e_nuc = 0.0;

  Matrix core_hamiltonian() const { return kinetic + nuclear; }
};

struct IntegralOptions {
  double schwarz_threshold = 1e-14;
  int jobs = 1;
};

/// One-electron integrals only (ERI left empty).
IntegralSet compute_one_electron(const chem::Molecule& mol, const chem::BasisSet& basis);

IntegralSet compute_integrals(const chem::Molecule& mol, const chem::BasisSet& basis,
                              const IntegralOptions& opts = {});

/// Cartesian -> real solid harmonic transform for angular momentum l,
/// (2l+1) x (l+1)(l+2)/2, unnormalized rows.
Matrix spherical_transform(int l);

}  // namespace qpecost::integrals
