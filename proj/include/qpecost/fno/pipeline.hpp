#pragma once

#include "qpecost/chem/basis.hpp"
#include "qpecost/chem/molecule.hpp"
#include "qpecost/correlation/energy.hpp"
#include "qpecost/correlation/mp2.hpp"
#include "qpecost/correlation/natural_orbitals.hpp"
#include "qpecost/integrals/engine.hpp"
#include "qpecost/scf/rhf.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qpecost::fno {

using correlation::EnergyMethod;

struct FnoCriterion {
  enum class Kind { Threshold, Count, EnergyMatch };
  Kind kind = Kind::Threshold;
  double threshold = 1e-4;           // keep NOs with occupation >= threshold; <= 0 keeps all
  int keep = 0;                      // number of virtual NOs kept
  double target_correlation = 0.0;   // Hartree
  double tolerance = 1e-3;           // Hartree
  EnergyMethod method = EnergyMethod::CISD;

  static FnoCriterion occupation(double sigma);
  static FnoCriterion count(int keep_virtuals);
  static FnoCriterion energy_match(double target, double tolerance, EnergyMethod method);
};

struct PipelineOptions {
  scf::ScfOptions scf;
  integrals::IntegralOptions integrals;
  correlation::CIOptions ci;
  double df_ratio = 5.0;  // N_DF = ratio * N
  std::filesystem::path cache_dir;  // integral cache; empty disables it
};

/// A kept-virtual truncation in semicanonical orbitals.
struct Truncation {
  int kept_virtuals = 0;
  hamiltonian::MOHamiltonian ham;
  Vector orbital_energies;
  Matrix rotation;  // canonical MO -> truncated orbitals, n_mo x (n_occ + kept)
};

/// Source-basis state shared by all truncations: RHF, full MO Hamiltonian,
/// MP2 and its natural orbitals.
class FnoPipeline {
 public:
  FnoPipeline(const chem::Molecule& mol, const chem::BasisSet& basis, const PipelineOptions& opts = {});

  const scf::ScfResult& scf() const { return scf_; }
  const hamiltonian::MOHamiltonian& full() const { return full_; }
  const correlation::MP2Result& mp2() const { return mp2_; }
  const correlation::NaturalOrbitalSet& natural_orbitals() const { return nos_; }
  const PipelineOptions& options() const { return opts_; }
  int n_occ() const { return scf_.n_occ; }
  int n_virt() const { return full_.n_orb() - scf_.n_occ; }

  Truncation truncate(int kept_virtuals) const;
  int kept_for_threshold(double sigma) const;
  /// Correlation energy (relative to the full-basis RHF energy) of a truncation.
  correlation::MethodEnergy correlation(const Truncation& t, EnergyMethod method) const;

 private:
  PipelineOptions opts_;
  scf::ScfResult scf_;
  hamiltonian::MOHamiltonian full_;
  correlation::MP2Result mp2_;
  correlation::NaturalOrbitalSet nos_;
};

struct FnoResult {
  Truncation truncation;
  correlation::NaturalOrbitalSet natural_orbitals;
  scf::ScfResult scf;
  /// Energy-match bookkeeping: kept virtuals -> correlation energy.
  std::map<int, double> search;
  double correlation_energy = 0.0;  // of the selected truncation, when evaluated
  EnergyMethod method_used = EnergyMethod::CISD;

  int n_kept() const { return truncation.ham.n_orb(); }
  double last_kept_occupation() const;
};

/// Smallest kept-virtual count whose correlation energy satisfies
/// E_corr(K) - target < tolerance. Galloping then bisection over K, followed
/// by a short downward linear check.
FnoResult select_truncation(const FnoPipeline& pipeline, const FnoCriterion& criterion);

FnoResult build_fno_hamiltonian(const chem::Molecule& mol, const chem::BasisSet& basis,
                                const FnoCriterion& criterion, const PipelineOptions& opts = {});

struct FnoReport {
  std::string source_basis;
  std::string reference_basis;
  std::string method_requested;
  std::string method_used;
  int n_source = 0;
  int n_reference = 0;
  int n_kept = 0;
  int df_rank_reference = 0;
  int df_rank_kept = 0;
  double lambda_reference = 0.0;
  double lambda_kept = 0.0;
  double norm_improvement_percent = 0.0;
  double orbital_reduction_percent = 0.0;
  double e_hf_reference = 0.0;
  double e_hf_source = 0.0;
  double e_corr_reference = 0.0;  // canonical MOs, reference basis
  double e_corr_kept = 0.0;       // truncated NOs, source basis
  double tolerance = 0.0;
  double last_kept_occupation = 0.0;
  std::map<int, double> search;
};

/// 100 * (reference - value) / reference
double percent_improvement(double reference, double value);

FnoReport fno_comparison_report(const chem::Molecule& mol, const chem::BasisSet& source,
                                const chem::BasisSet& reference, EnergyMethod method, double tolerance = 1e-3,
                                const PipelineOptions& opts = {});

/// Same-basis report for an already selected truncation: the reference is
/// the untruncated source Hamiltonian in canonical MOs.
FnoReport truncation_report(const FnoPipeline& pipeline, const FnoResult& result, EnergyMethod method);

/// One row of the bond-length scan.
struct ScanRow {
  double bond_angstrom = 0.0;
  std::string basis;
  double threshold = 0.0;
  int n_total = 0;
  int n_kept = 0;
  double lambda_df = 0.0;
  double e_hf = 0.0;
  std::map<std::string, double> e_corr;  // method tag -> correlation energy
  double last_kept_occupation = 0.0;
  bool ok = true;
  std::string error;
};

struct DissociationConfig {
  std::string element = "N";
  std::vector<double> bonds_angstrom = {0.9, 1.1, 1.3, 1.5, 1.7, 1.9, 2.1, 2.3, 2.5};
  std::vector<std::pair<chem::BasisSet, double>> bases;  // basis and NO threshold
  std::vector<EnergyMethod> methods = {EnergyMethod::MP2, EnergyMethod::CISD};
  PipelineOptions options;
};

/// Homonuclear-diatomic FNO scan; the RHF density at each bond length seeds
/// the next one. Failures are recorded per row.
std::vector<ScanRow> dissociation_scan(const DissociationConfig& config);

/// lambda_DF at N_DF = ratio * N, without the reconstruction check.
double df_lambda(const hamiltonian::MOHamiltonian& ham, double ratio = 5.0);
int df_rank(int n_orb, double ratio);

}  // namespace qpecost::fno
