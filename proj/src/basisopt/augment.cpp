#include "qpecost/basisopt/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpecost::basisopt {

chem::BasisShell augmented_shell(const std::vector<chem::BasisShell>& base, const chem::BasisShell& donor) {
  if (base.empty()) fail(ErrorKind::Input, "no base shell to augment");
  const int l = base.front().l();
  for (const auto& sh : base)
    if (sh.l() != l) fail(ErrorKind::Input, "base shells mix angular momenta");
  if (donor.l() != l)
    fail(ErrorKind::Input, "donor angular momentum " + std::to_string(donor.l()) + " does not match base " +
                               std::to_string(l));

  std::vector<double> base_exps;
  for (const auto& sh : base)
    for (double a : sh.exponents())
      if (std::find(base_exps.begin(), base_exps.end(), a) == base_exps.end()) base_exps.push_back(a);
  if (base_exps.size() > donor.exponents().size())
    fail(ErrorKind::Input, "donor shell has fewer primitives than the base contraction");

  std::vector<double> exps = donor.exponents();
  std::vector<bool> taken(exps.size(), false);
  std::vector<int> row_of(base_exps.size());
  for (std::size_t b = 0; b < base_exps.size(); ++b) {
    int best = -1;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < exps.size(); ++i) {
      const double d = std::abs(std::log(exps[i] / base_exps[b]));
      if (!taken[i] && d < dist) {
        dist = d;
        best = static_cast<int>(i);
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    row_of[b] = best;
  }
  for (std::size_t b = 0; b < base_exps.size(); ++b) exps[static_cast<std::size_t>(row_of[b])] = base_exps[b];

  int n_cols = 0;
  for (const auto& sh : base) n_cols += sh.n_contracted();
  Matrix coef = Matrix::Zero(static_cast<Eigen::Index>(exps.size()), n_cols);
  int col = 0;
  for (const auto& sh : base) {
    for (int c = 0; c < sh.n_contracted(); ++c, ++col)
      for (int i = 0; i < sh.n_primitives(); ++i) {
        const auto b = std::find(base_exps.begin(), base_exps.end(), sh.exponents()[static_cast<std::size_t>(i)]) -
                       base_exps.begin();
        coef(row_of[static_cast<std::size_t>(b)], col) = sh.coefficients()(i, c);
      }
  }
  return chem::BasisShell(l, std::move(exps), std::move(coef));
}

AugmentedBasis init_augmented(const chem::BasisSet& base, const chem::BasisSet& donor, const std::string& element,
                              int l) {
  const auto& shells = base.shells(element);
  std::vector<chem::BasisShell> picked, kept;
  int first = -1;
  for (std::size_t i = 0; i < shells.size(); ++i) {
    if (shells[i].l() == l) {
      if (first < 0) first = static_cast<int>(kept.size());
      picked.push_back(shells[i]);
    } else {
      kept.push_back(shells[i]);
    }
  }
  if (picked.empty()) fail(ErrorKind::Input, element + " has no l=" + std::to_string(l) + " shell to augment");
  const auto& donor_shells = donor.shells(element);
  const auto d = std::find_if(donor_shells.begin(), donor_shells.end(), [&](const auto& s) { return s.l() == l; });
  if (d == donor_shells.end())
    fail(ErrorKind::Input, "donor basis has no l=" + std::to_string(l) + " shell for " + element);

  auto merged = augmented_shell(picked, *d);
  AugmentedBasis out;
  for (double a : d->exponents())
    if (std::find(merged.exponents().begin(), merged.exponents().end(), a) == merged.exponents().end())
      out.replaced.push_back(a);
  kept.insert(kept.begin() + first, std::move(merged));
  out.basis = base;
  out.basis.set_shells(element, std::move(kept));
  out.basis.set_name(base.name() + "+aug");
  out.shell = first;
  out.parameters = chem::read_parameters(out.basis, chem::shell_slots(out.basis, element, first));
  return out;
}

}  // namespace qpecost::basisopt
