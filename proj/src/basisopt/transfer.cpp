#include "qpecost/basisopt/transfer.hpp"

#include "qpecost/fno/pipeline.hpp"
#include "qpecost/scf/mo_transform.hpp"

namespace qpecost::basisopt {

namespace {

struct BasisRun {
  std::map<std::string, double> energies;
  double lambda = 0.0;
};

BasisRun run_basis(const chem::Molecule& mol, const chem::BasisSet& basis, const TransferOptions& opts) {
  const auto ints = integrals::compute_integrals(mol, basis, opts.integrals);
  const auto scf = scf::run_rhf(mol, basis, ints, opts.scf);
  const auto ham = scf::transform_to_mo(ints, scf);
  BasisRun r;
  for (auto m : opts.methods) {
    if (m == correlation::EnergyMethod::CISD &&
        correlation::count_determinants(ham.n_orb(), ham.n_elec, correlation::CILevel::CISD) >
            opts.ci.max_cisd_determinants)
      continue;
    r.energies[correlation::to_string(m)] =
        correlation::method_energy(ham, scf.orbital_energies, m, opts.ci, false).total;
  }
  r.lambda = fno::df_lambda(ham, opts.df_ratio);
  return r;
}

}  // namespace

std::vector<TransferRow> transfer_evaluate(const chem::BasisSet& optimized,
                                           const std::vector<std::pair<std::string, chem::Molecule>>& molecules,
                                           const chem::BasisSet& reference, const TransferOptions& opts) {
  std::vector<TransferRow> rows;
  for (const auto& [name, mol] : molecules) {
    TransferRow row;
    row.name = name;
    try {
      row.n_orb = reference.n_functions(mol);
      if (row.n_orb > opts.max_orbitals || optimized.n_functions(mol) > opts.max_orbitals)
        fail(ErrorKind::Capacity, "more than " + std::to_string(opts.max_orbitals) + " orbitals");
      const auto ref = run_basis(mol, reference, opts);
      const auto opt = run_basis(mol, optimized, opts);
      row.e_reference = ref.energies;
      row.e_optimized = opt.energies;
      for (const auto& [tag, e] : ref.energies)
        if (auto it = opt.energies.find(tag); it != opt.energies.end()) row.delta[tag] = it->second - e;
      row.lambda_reference = ref.lambda;
      row.lambda_optimized = opt.lambda;
      row.improvement_percent = fno::percent_improvement(ref.lambda, opt.lambda);
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qpecost::basisopt
