#include "qpecost/chem/parameters.hpp"

#include <cmath>
#include <set>
#include <tuple>

namespace qpecost::chem {

namespace {

const BasisShell& slot_shell(const BasisSet& basis, const ParameterSlot& s) {
  const auto& shells = basis.shells(s.element);
  if (s.shell < 0 || s.shell >= static_cast<int>(shells.size()))
    fail(ErrorKind::Input, "parameter mask references missing shell " + std::to_string(s.shell) +
                               " of " + s.element);
  const auto& sh = shells[static_cast<std::size_t>(s.shell)];
  if (s.primitive < 0 || s.primitive >= sh.n_primitives() ||
      (s.kind == SlotKind::Coefficient && (s.column < 0 || s.column >= sh.n_contracted())))
    fail(ErrorKind::Input, "parameter mask references missing slot in shell " +
                               std::to_string(s.shell) + " of " + s.element);
  return sh;
}

void check_unique(const std::vector<ParameterSlot>& mask) {
  std::set<std::tuple<std::string, int, int, int, int>> seen;
  for (const auto& s : mask) {
    const int col = s.kind == SlotKind::Coefficient ? s.column : -1;
    if (!seen.emplace(s.element, s.shell, s.primitive, col, static_cast<int>(s.kind)).second)
      fail(ErrorKind::Input, "parameter mask covers a slot twice");
  }
}

}  // namespace

ParameterVector ParameterVector::with_values(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != mask.size())
    fail(ErrorKind::Input, "parameter vector length does not match mask");
  ParameterVector out{std::vector<double>(v.data(), v.data() + v.size()), mask};
  return out;
}

std::vector<ParameterSlot> shell_slots(const BasisSet& basis, const std::string& element, int shell) {
  const auto& sh = basis.shells(element).at(static_cast<std::size_t>(shell));
  std::vector<ParameterSlot> out;
  for (int i = 0; i < sh.n_primitives(); ++i) out.push_back({element, shell, i, 0, SlotKind::Exponent});
  for (int c = 0; c < sh.n_contracted(); ++c)
    for (int i = 0; i < sh.n_primitives(); ++i)
      out.push_back({element, shell, i, c, SlotKind::Coefficient});
  return out;
}

ParameterVector read_parameters(const BasisSet& basis, std::vector<ParameterSlot> mask) {
  check_unique(mask);
  ParameterVector out;
  for (const auto& s : mask) {
    const auto& sh = slot_shell(basis, s);
    out.values.push_back(s.kind == SlotKind::Exponent
                             ? std::log(sh.exponents()[static_cast<std::size_t>(s.primitive)])
                             : sh.coefficients()(s.primitive, s.column));
  }
  out.mask = std::move(mask);
  return out;
}

BasisSet apply_parameters(const BasisSet& base, const ParameterVector& theta) {
  if (theta.values.size() != theta.mask.size())
    fail(ErrorKind::Input, "parameter vector length does not match mask");
  if (theta.mask.empty()) return base;
  check_unique(theta.mask);

  struct Work {
    int l;
    std::vector<double> exps;
    Matrix coef;
  };
  std::map<std::pair<std::string, int>, Work> touched;
  for (std::size_t k = 0; k < theta.mask.size(); ++k) {
    const auto& s = theta.mask[k];
    const auto& sh = slot_shell(base, s);
    auto key = std::make_pair(s.element, s.shell);
    auto it = touched.find(key);
    if (it == touched.end())
      it = touched.emplace(key, Work{sh.l(), sh.exponents(), sh.coefficients()}).first;
    if (s.kind == SlotKind::Exponent)
      it->second.exps[static_cast<std::size_t>(s.primitive)] = std::exp(theta.values[k]);
    else
      it->second.coef(s.primitive, s.column) = theta.values[k];
  }

  BasisSet out = base;
  for (auto& [key, w] : touched) {
    auto shells = out.shells(key.first);
    shells[static_cast<std::size_t>(key.second)] = BasisShell(w.l, std::move(w.exps), std::move(w.coef));
    out.set_shells(key.first, std::move(shells));
  }
  return out;
}

}  // namespace qpecost::chem
