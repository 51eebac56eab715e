#pragma once

#include "qpecost/integrals/engine.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace qpecost::scf {

struct ScfOptions {
  int max_iter = 200;
  double energy_tol = 1e-9;
  double diis_tol = 1e-7;
  int diis_depth = 8;
  double lindep_threshold = 1e-10;
  /// AO density (D = 2 C_occ C_occ^T) to start from instead of the core guess.
  std::optional<Matrix> initial_density;
  /// Restarts along negative modes of the real RHF orbital Hessian.
  int stability_passes = 4;
  double stability_threshold = -1e-5;
};

struct ScfIteration {
  double energy = 0.0;
  double delta_energy = 0.0;
  double diis_error = 0.0;
};

struct ScfResult {
  Matrix coefficients;  // n_ao x n_mo
  Vector orbital_energies;
  double energy = 0.0;
  int n_occ = 0;
  int n_dropped = 0;  // overlap eigenvectors removed as linearly dependent
  /// Lowest eigenvalue of the real RHF orbital Hessian at the final point
  /// (NaN when not checked).
  double lowest_hessian_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  std::vector<ScfIteration> history;

  int n_mo() const { return static_cast<int>(coefficients.cols()); }
  Matrix density() const;
};

/// Thrown when the iteration limit is reached; carries the last iterate.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, ScfResult last)
      : Error(ErrorKind::Convergence, what), last_(std::move(last)) {}
  const ScfResult& last() const { return last_; }

 private:
  ScfResult last_;
};

/// Canonical orthogonalizer X (n_ao x n_mo) with X^T S X = 1, dropping
/// eigenvalues of S below `threshold`.
Matrix canonical_orthogonalizer(const Matrix& overlap, double threshold, int* n_dropped = nullptr);

/// Coulomb and exchange matrices J, K for a symmetric AO density.
std::pair<Matrix, Matrix> coulomb_exchange(const EriTensor& eri, const Matrix& density);

/// Lowest eigenpair of the real singlet orbital Hessian in the occupied x
/// virtual rotation space; vector index a * n_occ + i.
std::pair<double, Vector> lowest_hessian_mode(const integrals::IntegralSet& ints, const ScfResult& scf);

/// Starts from the core-Hamiltonian guess unless `opts.initial_density` is
/// set. A converged solution with a negative Hessian mode is rotated along
/// that mode and refined until stable or out of passes.
ScfResult run_rhf(const integrals::IntegralSet& ints, int n_electrons, const ScfOptions& opts = {});

/// Superposition of spin-averaged atomic densities: every distinct element
/// gets a fractional-occupation atomic SCF in its own basis functions.
Matrix atomic_density_guess(const chem::Molecule& mol, const chem::BasisSet& basis);

/// As above, but defaults to the atomic-density guess.
ScfResult run_rhf(const chem::Molecule& mol, const chem::BasisSet& basis, const integrals::IntegralSet& ints,
                  const ScfOptions& opts = {});

}  // namespace qpecost::scf
