#include "qpecost/chem/basis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qpecost::chem {

using nlohmann::json;

BasisShell::BasisShell(int l, std::vector<double> exponents, Matrix coefficients) : l_(l) {
  if (l < 0) fail(ErrorKind::Input, "shell angular momentum must be >= 0");
  const auto n = exponents.size();
  if (n == 0) fail(ErrorKind::Input, "shell with zero primitives");
  if (static_cast<std::size_t>(coefficients.rows()) != n || coefficients.cols() < 1)
    fail(ErrorKind::Input, "contraction matrix must be n_primitives x n_contracted");
  for (double a : exponents)
    if (!(a > 0.0) || !std::isfinite(a))
      fail(ErrorKind::Input, "exponents must be positive and finite");
  for (Eigen::Index c = 0; c < coefficients.cols(); ++c)
    if (coefficients.col(c).cwiseAbs().maxCoeff() == 0.0)
      fail(ErrorKind::Input, "contraction column " + std::to_string(c) + " is all zero");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return exponents[a] > exponents[b]; });
  exponents_.resize(n);
  coefficients_.resize(static_cast<Eigen::Index>(n), coefficients.cols());
  for (std::size_t i = 0; i < n; ++i) {
    exponents_[i] = exponents[order[i]];
    coefficients_.row(static_cast<Eigen::Index>(i)) =
        coefficients.row(static_cast<Eigen::Index>(order[i]));
  }
  for (std::size_t i = 1; i < n; ++i)
    if (exponents_[i] == exponents_[i - 1])
      fail(ErrorKind::Input, "duplicate exponent within one shell");
}

const std::vector<BasisShell>& BasisSet::shells(std::string_view element) const {
  auto it = shells_.find(std::string(element));
  if (it == shells_.end())
    fail(ErrorKind::Input, "basis '" + name_ + "' has no entry for element " + std::string(element));
  return it->second;
}

void BasisSet::set_shells(std::string_view element, std::vector<BasisShell> shells) {
  shells_[std::string(element)] = std::move(shells);
}

int BasisSet::n_functions(const Molecule& mol) const {
  int n = 0;
  for (const auto& atom : mol.atoms())
    for (const auto& sh : shells(atom.symbol)) n += sh.n_functions();
  return n;
}

void BasisSet::check_covers(const Molecule& mol) const {
  for (const auto& atom : mol.atoms()) (void)shells(atom.symbol);
}

std::uint64_t BasisSet::hash() const { return fnv1a(serialize_basis(*this)); }

namespace {

std::vector<double> read_reals(const json& arr, const char* what) {
  if (!arr.is_array()) fail(ErrorKind::Parse, std::string("basis: '") + what + "' must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) fail(ErrorKind::Parse, std::string("basis: non-numeric entry in ") + what);
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

BasisSet parse_basis(std::string_view json_text, std::string name) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, false);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("basis: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Parse, "basis: top level must be an element map");

  // nlohmann keeps the last duplicate key silently; scan the text for repeats first.
  std::vector<std::string> keys;
  json::parser_callback_t cb = [&](int depth, json::parse_event_t event, json& parsed) {
    if (depth == 1 && event == json::parse_event_t::key) keys.push_back(parsed.get<std::string>());
    return true;
  };
  const json rescanned = json::parse(json_text.begin(), json_text.end(), cb);
  (void)rescanned;
  std::sort(keys.begin(), keys.end());
  if (auto dup = std::adjacent_find(keys.begin(), keys.end()); dup != keys.end())
    fail(ErrorKind::Parse, "basis: duplicate element entry " + *dup);

  BasisSet basis(std::move(name));
  for (auto& [element, shells_json] : doc.items()) {
    (void)atomic_number(element);
    if (!shells_json.is_array()) fail(ErrorKind::Parse, "basis: element entry must be an array");
    std::vector<BasisShell> shells;
    for (const auto& sh : shells_json) {
      if (!sh.contains("l") || !sh.contains("exponents") || !sh.contains("coefficients"))
        fail(ErrorKind::Parse, "basis: shell needs l, exponents, coefficients");
      const int l = sh.at("l").get<int>();
      auto exps = read_reals(sh.at("exponents"), "exponents");
      for (double a : exps)
        if (!(a > 0.0)) fail(ErrorKind::Input, "basis: negative or zero exponent for " + element);
      if (exps.empty()) fail(ErrorKind::Input, "basis: shell with zero primitives for " + element);
      const auto& rows = sh.at("coefficients");
      if (!rows.is_array() || rows.size() != exps.size())
        fail(ErrorKind::Parse, "basis: coefficients must have one row per primitive");
      const auto ncol = rows.at(0).size();
      Matrix d(static_cast<Eigen::Index>(exps.size()), static_cast<Eigen::Index>(ncol));
      for (std::size_t i = 0; i < exps.size(); ++i) {
        auto row = read_reals(rows[i], "coefficients");
        if (row.size() != ncol) fail(ErrorKind::Parse, "basis: ragged coefficient rows");
        for (std::size_t c = 0; c < ncol; ++c)
          d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
      }
      shells.emplace_back(l, std::move(exps), std::move(d));
    }
    basis.set_shells(element, std::move(shells));
  }
  return basis;
}

BasisSet load_basis(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open basis file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_basis(ss.str(), path.stem().string());
}

namespace {

std::string real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

}  // namespace

std::string serialize_basis(const BasisSet& basis) {
  std::string out = "{\n";
  std::size_t k = 0;
  for (const auto& [element, shells] : basis.elements()) {
    out += "  \"" + element + "\": [\n";
    for (std::size_t s = 0; s < shells.size(); ++s) {
      const auto& sh = shells[s];
      out += "    {\"l\": " + std::to_string(sh.l()) + ", \"exponents\": [";
      for (int i = 0; i < sh.n_primitives(); ++i)
        out += (i ? ", " : "") + real(sh.exponents()[static_cast<std::size_t>(i)]);
      out += "], \"coefficients\": [";
      for (int i = 0; i < sh.n_primitives(); ++i) {
        out += i ? ", [" : "[";
        for (int c = 0; c < sh.n_contracted(); ++c)
          out += (c ? ", " : "") + real(sh.coefficients()(i, c));
        out += "]";
      }
      out += "]}";
      out += s + 1 < shells.size() ? ",\n" : "\n";
    }
    out += ++k < basis.elements().size() ? "  ],\n" : "  ]\n";
  }
  out += "}\n";
  return out;
}

void save_basis(const BasisSet& basis, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write basis file " + path.string());
  out << serialize_basis(basis);
}

BasisSet with_elements_from(const BasisSet& base, const BasisSet& override_basis,
                            const std::vector<std::string>& elements) {
  BasisSet out = base;
  for (const auto& el : elements) out.set_shells(el, override_basis.shells(el));
  out.set_name(base.name() + "+" + override_basis.name());
  return out;
}

}  // namespace qpecost::chem
