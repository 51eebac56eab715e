#include "qpecost/fno/pipeline.hpp"

#include "qpecost/correlation/semicanonical.hpp"
#include "qpecost/integrals/cache.hpp"
#include "qpecost/norms/double_factorization.hpp"
#include "qpecost/scf/mo_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpecost::fno {

FnoCriterion FnoCriterion::occupation(double sigma) {
  FnoCriterion c;
  c.kind = Kind::Threshold;
  c.threshold = sigma;
  return c;
}

FnoCriterion FnoCriterion::count(int keep_virtuals) {
  if (keep_virtuals < 0) fail(ErrorKind::Input, "kept virtual count must be non-negative");
  FnoCriterion c;
  c.kind = Kind::Count;
  c.keep = keep_virtuals;
  return c;
}

FnoCriterion FnoCriterion::energy_match(double target, double tolerance, EnergyMethod method) {
  if (!(tolerance > 0)) fail(ErrorKind::Input, "energy-match tolerance must be positive");
  FnoCriterion c;
  c.kind = Kind::EnergyMatch;
  c.target_correlation = target;
  c.tolerance = tolerance;
  c.method = method;
  return c;
}

int df_rank(int n_orb, double ratio) {
  return std::min(n_orb * n_orb, std::max(1, static_cast<int>(std::lround(ratio * n_orb))));
}

double df_lambda(const hamiltonian::MOHamiltonian& ham, double ratio) {
  norms::DFOptions opts;
  opts.compute_error = false;
  return norms::df_factorize(ham, df_rank(ham.n_orb(), ratio), opts).lambda();
}

FnoPipeline::FnoPipeline(const chem::Molecule& mol, const chem::BasisSet& basis, const PipelineOptions& opts)
    : opts_(opts) {
  const auto ints = integrals::cached_integrals(mol, basis, opts.cache_dir, opts.integrals);
  scf_ = scf::run_rhf(mol, basis, ints, opts.scf);
  if (scf_.n_dropped > 0)
    fail(ErrorKind::Numerical, "FNO pipeline needs a linearly independent basis (" +
                                   std::to_string(scf_.n_dropped) + " functions dropped)");
  full_ = scf::transform_to_mo(ints, scf_);
  mp2_ = correlation::run_mp2(full_, scf_.orbital_energies);
  nos_ = correlation::natural_orbitals(mp2_, basis.name());
}

int FnoPipeline::kept_for_threshold(double sigma) const {
  const auto& occ = nos_.occupations;
  if (!(sigma > 0)) return static_cast<int>(occ.size());
  int k = 0;
  while (k < occ.size() && occ[k] >= sigma) ++k;
  return k;
}

Truncation FnoPipeline::truncate(int kept) const {
  const int o = n_occ();
  const int v = n_virt();
  if (kept < 0 || kept > v) fail(ErrorKind::Input, "kept virtual count out of range");
  const int n = full_.n_orb();
  Matrix r = Matrix::Zero(n, o + kept);
  r.topLeftCorner(o, o).setIdentity();
  r.bottomRightCorner(v, kept) = nos_.rotation.leftCols(kept);

  // Semicanonicalize inside the kept space.
  const Matrix fock = correlation::fock_matrix(full_);
  Truncation t;
  const Matrix u = correlation::block_diagonalizer(r.transpose() * fock * r, o, &t.orbital_energies);
  t.kept_virtuals = kept;
  t.rotation = r * u;
  t.ham = hamiltonian::rotate(full_, t.rotation);
  return t;
}

correlation::MethodEnergy FnoPipeline::correlation(const Truncation& t, EnergyMethod method) const {
  auto e = correlation::method_energy(t.ham, t.orbital_energies, method, opts_.ci);
  e.reference = scf_.energy;
  return e;
}

double FnoResult::last_kept_occupation() const {
  const int k = truncation.kept_virtuals;
  if (k == 0) return std::numeric_limits<double>::quiet_NaN();
  return natural_orbitals.occupations[k - 1];
}

namespace {

int energy_match_count(const FnoPipeline& p, const FnoCriterion& c, std::map<int, double>& log,
                       std::map<int, EnergyMethod>& used) {
  auto satisfied = [&](int k) {
    auto it = log.find(k);
    if (it == log.end()) {
      const auto e = p.correlation(p.truncate(k), c.method);
      it = log.emplace(k, e.correlation()).first;
      used[k] = e.used;
    }
    return it->second - c.target_correlation < c.tolerance;
  };
  const int v = p.n_virt();
  if (!satisfied(v))
    fail(ErrorKind::Input, "energy match unattainable: full virtual space gives E_corr " +
                               std::to_string(log.at(v)) + " vs target " + std::to_string(c.target_correlation));
  if (satisfied(0)) return 0;
  // Gallop to bracket the first satisfying count, then bisect.
  int lo = 0, hi = 1;
  while (hi < v && !satisfied(hi)) {
    lo = hi;
    hi = std::min(v, 2 * hi);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (satisfied(mid) ? hi : lo) = mid;
  }
  for (int k = std::max(0, hi - 2); k < hi; ++k)
    if (satisfied(k)) return k;
  return hi;
}

}  // namespace

FnoResult select_truncation(const FnoPipeline& pipeline, const FnoCriterion& criterion) {
  FnoResult out;
  out.natural_orbitals = pipeline.natural_orbitals();
  out.scf = pipeline.scf();
  int kept = 0;
  std::map<int, EnergyMethod> used;
  switch (criterion.kind) {
    case FnoCriterion::Kind::Threshold:
      kept = pipeline.kept_for_threshold(criterion.threshold);
      break;
    case FnoCriterion::Kind::Count:
      kept = std::min(criterion.keep, pipeline.n_virt());
      break;
    case FnoCriterion::Kind::EnergyMatch:
      kept = energy_match_count(pipeline, criterion, out.search, used);
      break;
  }
  out.natural_orbitals.threshold =
      criterion.kind == FnoCriterion::Kind::Threshold ? std::optional<double>(criterion.threshold) : std::nullopt;
  out.truncation = pipeline.truncate(kept);
  out.method_used = criterion.method;
  if (auto it = out.search.find(kept); it != out.search.end()) {
    out.correlation_energy = it->second;
    out.method_used = used.at(kept);
  }
  return out;
}

FnoResult build_fno_hamiltonian(const chem::Molecule& mol, const chem::BasisSet& basis,
                                const FnoCriterion& criterion, const PipelineOptions& opts) {
  return select_truncation(FnoPipeline(mol, basis, opts), criterion);
}

double percent_improvement(double reference, double value) {
  if (reference == 0) fail(ErrorKind::Numerical, "percent improvement against a zero reference");
  return 100.0 * (reference - value) / reference;
}

FnoReport fno_comparison_report(const chem::Molecule& mol, const chem::BasisSet& source,
                                const chem::BasisSet& reference, EnergyMethod method, double tolerance,
                                const PipelineOptions& opts) {
  FnoReport r;
  r.source_basis = source.name();
  r.reference_basis = reference.name();
  r.method_requested = correlation::to_string(method);
  r.tolerance = tolerance;

  const FnoPipeline ref(mol, reference, opts);
  const auto e_ref = correlation::method_energy(ref.full(), ref.scf().orbital_energies, method, opts.ci);
  r.n_reference = ref.full().n_orb();
  r.e_hf_reference = ref.scf().energy;
  r.e_corr_reference = e_ref.correlation();
  r.df_rank_reference = df_rank(r.n_reference, opts.df_ratio);
  r.lambda_reference = df_lambda(ref.full(), opts.df_ratio);

  const auto criterion = FnoCriterion::energy_match(r.e_corr_reference, tolerance, method);
  const bool same = source == reference;
  const auto src = same ? std::nullopt : std::optional<FnoPipeline>(std::in_place, mol, source, opts);
  const FnoPipeline& pipe = same ? ref : *src;
  const auto result = select_truncation(pipe, criterion);

  r.n_source = pipe.full().n_orb();
  r.n_kept = result.n_kept();
  r.e_hf_source = pipe.scf().energy;
  r.e_corr_kept = result.correlation_energy;
  r.method_used = correlation::to_string(
      e_ref.used == EnergyMethod::MP2 ? EnergyMethod::MP2 : result.method_used);
  r.df_rank_kept = df_rank(r.n_kept, opts.df_ratio);
  r.lambda_kept = df_lambda(result.truncation.ham, opts.df_ratio);
  r.norm_improvement_percent = percent_improvement(r.lambda_reference, r.lambda_kept);
  r.orbital_reduction_percent = percent_improvement(r.n_reference, r.n_kept);
  r.last_kept_occupation = result.last_kept_occupation();
  r.search = result.search;
  return r;
}

FnoReport truncation_report(const FnoPipeline& pipeline, const FnoResult& result, EnergyMethod method) {
  const auto& opts = pipeline.options();
  FnoReport r;
  r.source_basis = r.reference_basis = pipeline.natural_orbitals().source_basis;
  r.method_requested = correlation::to_string(method);
  const auto e_ref = correlation::method_energy(pipeline.full(), pipeline.scf().orbital_energies, method, opts.ci);
  const auto e_kept = pipeline.correlation(result.truncation, method);
  r.method_used = correlation::to_string(e_ref.used == EnergyMethod::MP2 ? EnergyMethod::MP2 : e_kept.used);
  r.n_source = r.n_reference = pipeline.full().n_orb();
  r.n_kept = result.n_kept();
  r.e_hf_reference = r.e_hf_source = pipeline.scf().energy;
  r.e_corr_reference = e_ref.correlation();
  r.e_corr_kept = e_kept.correlation();
  r.df_rank_reference = df_rank(r.n_reference, opts.df_ratio);
  r.df_rank_kept = df_rank(r.n_kept, opts.df_ratio);
  r.lambda_reference = df_lambda(pipeline.full(), opts.df_ratio);
  r.lambda_kept = df_lambda(result.truncation.ham, opts.df_ratio);
  r.norm_improvement_percent = percent_improvement(r.lambda_reference, r.lambda_kept);
  r.orbital_reduction_percent = percent_improvement(r.n_reference, r.n_kept);
  r.last_kept_occupation = result.last_kept_occupation();
  r.search = result.search;
  return r;
}

std::vector<ScanRow> dissociation_scan(const DissociationConfig& config) {
  std::vector<ScanRow> rows;
  for (const auto& [basis, sigma] : config.bases) {
    std::optional<Matrix> guess;
    for (double bond : config.bonds_angstrom) {
      ScanRow row;
      row.bond_angstrom = bond;
      row.basis = basis.name();
      row.threshold = sigma;
      try {
        PipelineOptions opts = config.options;
        opts.scf.initial_density = guess;
        const FnoPipeline pipe(chem::diatomic(config.element, config.element, bond), basis, opts);
        guess = pipe.scf().density();
        const auto t = pipe.truncate(pipe.kept_for_threshold(sigma));
        row.n_total = pipe.full().n_orb();
        row.n_kept = t.ham.n_orb();
        row.e_hf = pipe.scf().energy;
        row.lambda_df = df_lambda(t.ham, opts.df_ratio);
        row.last_kept_occupation =
            t.kept_virtuals > 0 ? pipe.natural_orbitals().occupations[t.kept_virtuals - 1]
                                : std::numeric_limits<double>::quiet_NaN();
        for (auto m : config.methods) {
          const auto e = pipe.correlation(t, m);
          std::string tag = correlation::to_string(m);
          if (e.used != m) tag += std::string("->") + correlation::to_string(e.used);
          row.e_corr[tag] = e.correlation();
        }
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
        guess.reset();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace qpecost::fno
