#include "qpecost/hamiltonian/fcidump.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <tuple>

namespace qpecost::hamiltonian {

namespace {

std::optional<int> header_int(const std::string& header, const std::string& key) {
  const std::regex re("\\b" + key + "\\s*=\\s*(-?[0-9]+)", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(header, m, re)) return std::nullopt;
  return std::stoi(m[1]);
}

using Key = std::tuple<int, int, int, int>;

Key canonical(int i, int j, int k, int l) {
  if (k == 0 && l == 0) return {std::max(i, j), std::min(i, j), 0, 0};
  auto a = std::make_pair(std::max(i, j), std::min(i, j));
  auto b = std::make_pair(std::max(k, l), std::min(k, l));
  if (a < b) std::swap(a, b);
  return {a.first, a.second, b.first, b.second};
}

double parse_real(std::string token, int line_no) {
  std::replace_if(token.begin(), token.end(), [](char c) { return c == 'D' || c == 'd'; }, 'e');
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(ErrorKind::Parse, "FCIDUMP line " + std::to_string(line_no) + ": bad value '" + token + "'");
  return v;
}

}  // namespace

MOHamiltonian parse_fcidump(std::string_view text) {
  const std::string s(text);
  std::istringstream in(s);
  std::string line;
  std::string header;
  int line_no = 0;
  bool closed = false;
  while (std::getline(in, line)) {
    ++line_no;
    header += line + "\n";
    std::string upper;
    for (unsigned char c : line)
      if (!std::isspace(c)) upper.push_back(static_cast<char>(std::toupper(c)));
    if (upper.find("&END") != std::string::npos || upper == "/") {
      closed = true;
      break;
    }
  }
  if (!closed) fail(ErrorKind::Parse, "FCIDUMP header is not terminated by &END");
  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  if (!norb) fail(ErrorKind::Parse, "FCIDUMP header lacks NORB");
  if (!nelec) fail(ErrorKind::Parse, "FCIDUMP header lacks NELEC");
  if (const auto ms2 = header_int(header, "MS2"); ms2 && *ms2 != 0)
    fail(ErrorKind::Input, "FCIDUMP with MS2 != 0 is not supported");
  const int n = *norb;
  if (n < 0) fail(ErrorKind::Parse, "FCIDUMP NORB must be non-negative");

  std::map<Key, double> entries;
  double core = 0.0;
  bool have_core = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string value_text;
    if (!(ls >> value_text)) continue;
    int idx[4];
    for (int& x : idx)
      if (!(ls >> x)) fail(ErrorKind::Parse, "FCIDUMP line " + std::to_string(line_no) + ": expected four indices");
    std::string extra;
    if (ls >> extra) fail(ErrorKind::Parse, "FCIDUMP line " + std::to_string(line_no) + ": trailing text");
    const double value = parse_real(value_text, line_no);
    for (int x : idx)
      if (x < 0 || x > n)
        fail(ErrorKind::Parse, "FCIDUMP line " + std::to_string(line_no) + ": index " + std::to_string(x) +
                                   " exceeds NORB=" + std::to_string(n));
    const auto [i, j, k, l] = std::tie(idx[0], idx[1], idx[2], idx[3]);
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (have_core && !same(core, value)) fail(ErrorKind::Parse, "FCIDUMP has contradictory core energies");
      core = value;
      have_core = true;
      continue;
    }
    if (j == 0 && k == 0 && l == 0) continue;  // orbital energy lines carry no Hamiltonian data
    if (i == 0 || j == 0 || (k == 0) != (l == 0))
      fail(ErrorKind::Parse, "FCIDUMP line " + std::to_string(line_no) + ": malformed index pattern");
    const Key key = canonical(i, j, k, l);
    auto [it, inserted] = entries.emplace(key, value);
    if (!inserted && !same(it->second, value))
      fail(ErrorKind::Parse, "FCIDUMP line " + std::to_string(line_no) + ": contradicts an earlier entry");
  }

  MOHamiltonian ham;
  ham.n_elec = *nelec;
  ham.e_core = core;
  ham.h = Matrix::Zero(n, n);
  ham.v = EriTensor(n);
  for (const auto& [key, value] : entries) {
    const auto [i, j, k, l] = key;
    if (k == 0) {
      ham.h(i - 1, j - 1) = ham.h(j - 1, i - 1) = value;
    } else {
      ham.v.set_symmetric(i - 1, j - 1, k - 1, l - 1, value);
    }
  }
  ham.validate();
  return ham;
}

MOHamiltonian read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open FCIDUMP " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fcidump(ss.str());
}

std::string format_fcidump(const MOHamiltonian& ham, double threshold) {
  const int n = ham.n_orb();
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof(buf), " &FCI NORB=%d,NELEC=%d,MS2=0,\n  ORBSYM=", n, ham.n_elec);
  out += buf;
  for (int p = 0; p < n; ++p) out += "1,";
  out += "\n  ISYM=1,\n &END\n";
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof(buf), "%.16e %d %d %d %d\n", v, i, j, k, l);
    out += buf;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = ham.v(i, j, k, l);
          if (std::abs(v) > threshold) emit(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(ham.h(i, j)) > threshold) emit(ham.h(i, j), i + 1, j + 1, 0, 0);
  emit(ham.e_core, 0, 0, 0, 0);
  return out;
}

void write_fcidump(const MOHamiltonian& ham, const std::filesystem::path& path, double threshold) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::Io, "cannot write FCIDUMP " + path.string());
  os << format_fcidump(ham, threshold);
  if (!os) fail(ErrorKind::Io, "failed while writing FCIDUMP " + path.string());
}

}  // namespace qpecost::hamiltonian
