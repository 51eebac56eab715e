#include "qpecost/norms/jw_oracle.hpp"

#include <bit>
#include <unordered_map>
#include <vector>

namespace qpecost::norms {

namespace {

using Complex = std::complex<double>;

// Operator term c * X^x Z^z (X factors to the left).
struct Term {
  std::uint32_t x, z;
  Complex c;
};

using Ops = std::vector<Term>;

Ops multiply(const Ops& a, const Ops& b) {
  Ops out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a)
    for (const auto& t : b) {
      // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
      const double sign = (std::popcount(s.z & t.x) % 2) ? -1.0 : 1.0;
      out.push_back({s.x ^ t.x, s.z ^ t.z, sign * s.c * t.c});
    }
  return out;
}

Ops ladder(int j, bool create) {
  const std::uint32_t bit = 1u << j;
  const std::uint32_t low = bit - 1u;
  // X - iY = X(1 + Z), X + iY = X(1 - Z)
  return {{bit, low, 0.5}, {bit, low | bit, create ? 0.5 : -0.5}};
}

}  // namespace

std::string PauliString::label(int n_qubits) const {
  std::string s;
  for (int k = 0; k < n_qubits; ++k) {
    const bool bx = (x >> k) & 1u, bz = (z >> k) & 1u;
    s.push_back(bx && bz ? 'Y' : bx ? 'X' : bz ? 'Z' : 'I');
  }
  return s;
}

PauliExpansion jordan_wigner(const hamiltonian::MOHamiltonian& ham, double drop_below) {
  const int n = ham.n_orb();
  if (n > kMaxOracleOrbitals)
    fail(ErrorKind::Capacity, "Pauli enumeration supports at most " + std::to_string(kMaxOracleOrbitals) +
                                  " spatial orbitals, got " + std::to_string(n));
  const int m = 2 * n;
  std::vector<Ops> create(static_cast<std::size_t>(m)), annihilate(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    create[static_cast<std::size_t>(j)] = ladder(j, true);
    annihilate[static_cast<std::size_t>(j)] = ladder(j, false);
  }
  auto spatial = [](int so) { return so / 2; };
  auto spin = [](int so) { return so % 2; };

  std::unordered_map<std::uint64_t, Complex> acc;
  auto add = [&](const Ops& ops, double weight) {
    for (const auto& t : ops) acc[(std::uint64_t(t.x) << 32) | t.z] += weight * t.c;
  };
  add({{0u, 0u, 1.0}}, ham.e_core);

  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      if (spin(p) != spin(q)) continue;
      const double w = ham.h(spatial(p), spatial(q));
      if (w != 0.0) add(multiply(create[static_cast<std::size_t>(p)], annihilate[static_cast<std::size_t>(q)]), w);
    }

  // 1/2 sum (pq|rs) a+_p a+_r a_s a_q with spin(p)=spin(q), spin(r)=spin(s)
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r) {
      if (p == r) continue;
      const Ops pr = multiply(create[static_cast<std::size_t>(p)], create[static_cast<std::size_t>(r)]);
      for (int s = 0; s < m; ++s) {
        if (spin(s) != spin(r)) continue;
        for (int q = 0; q < m; ++q) {
          if (q == s || spin(q) != spin(p)) continue;
          const double w = 0.5 * ham.v(spatial(p), spatial(q), spatial(r), spatial(s));
          if (w == 0.0) continue;
          add(multiply(pr, multiply(annihilate[static_cast<std::size_t>(s)], annihilate[static_cast<std::size_t>(q)])), w);
        }
      }
    }

  PauliExpansion out;
  out.n_qubits = m;
  for (const auto& [key, c] : acc) {
    const PauliString ps{static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xffffffffu)};
    // X^x Z^z = (-i)^{|x & z|} P with Y on doubly-marked qubits.
    Complex phase = 1.0;
    for (int k = std::popcount(ps.x & ps.z); k > 0; --k) phase *= Complex(0.0, -1.0);
    const Complex coef = c * phase;
    if (std::abs(coef) > drop_below) out.terms.emplace(ps, coef);
  }
  return out;
}

OracleNorm jw_oracle_norm(const hamiltonian::MOHamiltonian& ham) {
  const auto expansion = jordan_wigner(ham);
  OracleNorm out;
  for (const auto& [ps, c] : expansion.terms) {
    out.with_identity += std::abs(c);
    ++out.n_terms;
    if (!ps.identity()) {
      out.without_identity += std::abs(c);
      ++out.n_non_identity_terms;
    }
  }
  return out;
}

}  // namespace qpecost::norms
