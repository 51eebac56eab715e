#include "qpecost/integrals/engine.hpp"

#include "qpecost/integrals/boys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

namespace qpecost::integrals {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxIndex = kMaxAngularMomentum + 2;  // kinetic needs j + 2
constexpr int kTDim = 2 * kMaxIndex + 1;
// Primitive pairs whose Gaussian product prefactor falls below this are skipped.
constexpr double kPairCutoff = 1e-18;

struct CartPower {
  int x, y, z;
};

const std::vector<CartPower>& cartesians(int l) {
  static const auto table = [] {
    std::array<std::vector<CartPower>, 2 * kMaxAngularMomentum + 1> t;
    for (int L = 0; L <= 2 * kMaxAngularMomentum; ++L)
      for (int a = L; a >= 0; --a)
        for (int b = L - a; b >= 0; --b) t[static_cast<std::size_t>(L)].push_back({a, b, L - a - b});
    return t;
  }();
  return table.at(static_cast<std::size_t>(l));
}

struct HermiteIndex {
  int t, u, v;
};

const std::vector<HermiteIndex>& hermites(int L) {
  static const auto table = [] {
    std::array<std::vector<HermiteIndex>, 4 * kMaxAngularMomentum + 1> t;
    for (int L = 0; L <= 4 * kMaxAngularMomentum; ++L)
      for (int n = 0; n <= L; ++n)
        for (int a = n; a >= 0; --a)
          for (int b = n - a; b >= 0; --b) t[static_cast<std::size_t>(L)].push_back({a, b, n - a - b});
    return t;
  }();
  return table.at(static_cast<std::size_t>(L));
}

// 1D Hermite expansion coefficients E^{ij}_t for i <= imax, j <= jmax.
struct Hermite1D {
  std::array<double, (kMaxIndex + 1) * (kMaxIndex + 1) * kTDim> e{};
  int jdim = 0;

  double operator()(int i, int j, int t) const {
    return e[static_cast<std::size_t>((i * jdim + j) * kTDim + t)];
  }
  double& at(int i, int j, int t) { return e[static_cast<std::size_t>((i * jdim + j) * kTDim + t)]; }

  Hermite1D(int imax, int jmax, double a, double b, double xab) : jdim(jmax + 1) {
    const double p = a + b;
    const double inv2p = 0.5 / p;
    const double xpa = -b / p * xab;
    const double xpb = a / p * xab;
    at(0, 0, 0) = std::exp(-a * b / p * xab * xab);
    for (int i = 0; i <= imax; ++i)
      for (int j = 0; j <= jmax; ++j) {
        if (i == 0 && j == 0) continue;
        const int si = i > 0 ? i - 1 : i;
        const int sj = i > 0 ? j : j - 1;
        const double x = i > 0 ? xpa : xpb;
        for (int t = 0; t <= i + j; ++t) {
          double v = x * (*this)(si, sj, t);
          if (t > 0) v += inv2p * (*this)(si, sj, t - 1);
          if (t + 1 <= si + sj) v += (t + 1) * (*this)(si, sj, t + 1);
          at(i, j, t) = v;
        }
      }
  }
};

// Hermite Coulomb integrals R_{tuv}(alpha, pc) for t+u+v <= L, stored
// densely at (t*(L+1)+u)*(L+1)+v.
void hermite_coulomb(int L, double alpha, const Vec3& pc, std::vector<double>& out,
                     std::vector<double>& scratch) {
  const int d = L + 1;
  const std::size_t size = static_cast<std::size_t>(d) * d * d;
  out.resize(size);
  scratch.resize(size);
  double f[4 * kMaxAngularMomentum + 1];
  BoysTable::instance().evaluate(L, alpha * pc.squaredNorm(), f);
  auto idx = [d](int t, int u, int v) { return static_cast<std::size_t>((t * d + u) * d + v); };

  std::vector<double>* prev = &scratch;
  std::vector<double>* cur = &out;
  if (L % 2 == 1) std::swap(prev, cur);  // the n = 0 level must land in `out`
  double scale = std::pow(-2.0 * alpha, L);
  (*cur)[0] = scale * f[L];
  for (int n = L - 1; n >= 0; --n) {
    std::swap(prev, cur);
    scale /= -2.0 * alpha;
    const auto& r = *prev;
    auto& w = *cur;
    w[0] = scale * f[n];
    const int top = L - n;
    for (int t = 0; t <= top; ++t)
      for (int u = 0; u <= top - t; ++u)
        for (int v = 0; v <= top - t - u; ++v) {
          if (t == 0 && u == 0 && v == 0) continue;
          double value;
          if (t > 0) {
            value = pc.x() * r[idx(t - 1, u, v)];
            if (t > 1) value += (t - 1) * r[idx(t - 2, u, v)];
          } else if (u > 0) {
            value = pc.y() * r[idx(t, u - 1, v)];
            if (u > 1) value += (u - 1) * r[idx(t, u - 2, v)];
          } else {
            value = pc.z() * r[idx(t, u, v - 1)];
            if (v > 1) value += (v - 1) * r[idx(t, u, v - 2)];
          }
          w[idx(t, u, v)] = value;
        }
  }
}

struct OneBodyBlocks {
  Matrix s, t, v;
};

// Cartesian S, T and (if `nuclei` is given) V blocks for a shell pair.
OneBodyBlocks cartesian_one_body(const Shell& a, const Shell& b, const chem::Molecule* nuclei) {
  const auto& ca = cartesians(a.l);
  const auto& cb = cartesians(b.l);
  const int na = static_cast<int>(ca.size());
  const int nb = static_cast<int>(cb.size());
  OneBodyBlocks out{Matrix::Zero(na, nb), Matrix::Zero(na, nb), Matrix::Zero(na, nb)};
  const Vec3 ab = a.center - b.center;
  std::vector<double> r, scratch;
  const int L = a.l + b.l;
  for (std::size_t i = 0; i < a.exponents.size(); ++i)
    for (std::size_t j = 0; j < b.exponents.size(); ++j) {
      const double alpha = a.exponents[i];
      const double beta = b.exponents[j];
      const double p = alpha + beta;
      if (std::exp(-alpha * beta / p * ab.squaredNorm()) < kPairCutoff) continue;
      const double c = a.coefficients[i] * b.coefficients[j];
      const Hermite1D ex(a.l, b.l + 2, alpha, beta, ab.x());
      const Hermite1D ey(a.l, b.l + 2, alpha, beta, ab.y());
      const Hermite1D ez(a.l, b.l + 2, alpha, beta, ab.z());
      const double s1 = std::sqrt(kPi / p);
      auto ov = [&](const Hermite1D& e, int ia, int jb) { return jb < 0 ? 0.0 : e(ia, jb, 0) * s1; };
      auto lap = [&](const Hermite1D& e, int ia, int jb) {
        return jb * (jb - 1) * ov(e, ia, jb - 2) - 2.0 * beta * (2 * jb + 1) * ov(e, ia, jb) +
               4.0 * beta * beta * ov(e, ia, jb + 2);
      };
      for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
          const auto& pa = ca[static_cast<std::size_t>(x)];
          const auto& pb = cb[static_cast<std::size_t>(y)];
          const double sx = ov(ex, pa.x, pb.x), sy = ov(ey, pa.y, pb.y), sz = ov(ez, pa.z, pb.z);
          out.s(x, y) += c * sx * sy * sz;
          out.t(x, y) += -0.5 * c *
                         (lap(ex, pa.x, pb.x) * sy * sz + sx * lap(ey, pa.y, pb.y) * sz +
                          sx * sy * lap(ez, pa.z, pb.z));
        }
      if (!nuclei) continue;
      const Vec3 P = (alpha * a.center + beta * b.center) / p;
      const auto& herm = hermites(L);
      for (const auto& atom : nuclei->atoms()) {
        hermite_coulomb(L, p, P - atom.position, r, scratch);
        const double pref = -atom.charge * 2.0 * kPi / p * c;
        const int d = L + 1;
        for (int x = 0; x < na; ++x)
          for (int y = 0; y < nb; ++y) {
            const auto& pa = ca[static_cast<std::size_t>(x)];
            const auto& pb = cb[static_cast<std::size_t>(y)];
            double sum = 0.0;
            for (const auto& h : herm) {
              if (h.t > pa.x + pb.x || h.u > pa.y + pb.y || h.v > pa.z + pb.z) continue;
              sum += ex(pa.x, pb.x, h.t) * ey(pa.y, pb.y, h.u) * ez(pa.z, pb.z, h.v) *
                     r[static_cast<std::size_t>((h.t * d + h.u) * d + h.v)];
            }
            out.v(x, y) += pref * sum;
          }
      }
    }
  return out;
}

double primitive_norm(int l, double alpha) {
  double dfact = 1.0;  // (2l-1)!!
  for (int k = 2 * l - 1; k > 1; k -= 2) dfact *= k;
  return std::pow(2.0 * alpha / kPi, 0.75) * std::pow(4.0 * alpha, 0.5 * l) / std::sqrt(dfact);
}

// Cartesian -> normalized spherical transform for each shell.
std::vector<Matrix> shell_transforms(const std::vector<Shell>& shells) {
  std::vector<Matrix> out;
  out.reserve(shells.size());
  for (const auto& sh : shells) {
    Matrix t = spherical_transform(sh.l);
    const auto blocks = cartesian_one_body(sh, sh, nullptr);
    const Matrix self = t * blocks.s * t.transpose();
    for (int m = 0; m < sh.size(); ++m) {
      if (!(self(m, m) > 0.0)) fail(ErrorKind::Numerical, "contracted function has non-positive norm");
      t.row(m) /= std::sqrt(self(m, m));
    }
    out.push_back(std::move(t));
  }
  return out;
}

int total_functions(const std::vector<Shell>& shells) {
  return shells.empty() ? 0 : shells.back().offset + shells.back().size();
}

struct PairPrimitive {
  double p;
  Vec3 center;
  Matrix e;  // n_hermite(L) x (ncart_a * ncart_b), contraction weights folded in
};

struct ShellPair {
  int a, b;
  int L;
  std::vector<PairPrimitive> prims;
  Matrix sph;  // kron(T_a, T_b): (na*nb) x (ncart_a*ncart_b)
  double bound = 0.0;
};

ShellPair make_pair_data(const std::vector<Shell>& shells, const std::vector<Matrix>& transforms, int ia,
                         int ib) {
  const Shell& a = shells[static_cast<std::size_t>(ia)];
  const Shell& b = shells[static_cast<std::size_t>(ib)];
  ShellPair out{ia, ib, a.l + b.l, {}, {}, 0.0};
  const auto& ca = cartesians(a.l);
  const auto& cb = cartesians(b.l);
  const auto& herm = hermites(out.L);
  const Vec3 ab = a.center - b.center;
  for (std::size_t i = 0; i < a.exponents.size(); ++i)
    for (std::size_t j = 0; j < b.exponents.size(); ++j) {
      const double alpha = a.exponents[i];
      const double beta = b.exponents[j];
      const double p = alpha + beta;
      if (std::exp(-alpha * beta / p * ab.squaredNorm()) < kPairCutoff) continue;
      const double c = a.coefficients[i] * b.coefficients[j];
      const Hermite1D ex(a.l, b.l, alpha, beta, ab.x());
      const Hermite1D ey(a.l, b.l, alpha, beta, ab.y());
      const Hermite1D ez(a.l, b.l, alpha, beta, ab.z());
      PairPrimitive prim{p, (alpha * a.center + beta * b.center) / p,
                         Matrix::Zero(static_cast<Eigen::Index>(herm.size()),
                                      static_cast<Eigen::Index>(ca.size() * cb.size()))};
      for (std::size_t x = 0; x < ca.size(); ++x)
        for (std::size_t y = 0; y < cb.size(); ++y) {
          const auto& pa = ca[x];
          const auto& pb = cb[y];
          const auto col = static_cast<Eigen::Index>(x * cb.size() + y);
          for (std::size_t h = 0; h < herm.size(); ++h) {
            const auto& hi = herm[h];
            if (hi.t > pa.x + pb.x || hi.u > pa.y + pb.y || hi.v > pa.z + pb.z) continue;
            prim.e(static_cast<Eigen::Index>(h), col) =
                c * ex(pa.x, pb.x, hi.t) * ey(pa.y, pb.y, hi.u) * ez(pa.z, pb.z, hi.v);
          }
        }
      out.prims.push_back(std::move(prim));
    }
  const Matrix& ta = transforms[static_cast<std::size_t>(ia)];
  const Matrix& tb = transforms[static_cast<std::size_t>(ib)];
  out.sph.resize(ta.rows() * tb.rows(), ta.cols() * tb.cols());
  for (Eigen::Index i = 0; i < ta.rows(); ++i)
    for (Eigen::Index j = 0; j < tb.rows(); ++j)
      for (Eigen::Index k = 0; k < ta.cols(); ++k)
        for (Eigen::Index l = 0; l < tb.cols(); ++l)
          out.sph(i * tb.rows() + j, k * tb.cols() + l) = ta(i, k) * tb(j, l);
  return out;
}

struct QuartetWorkspace {
  std::vector<double> r, scratch;
  Matrix rmat, acc, cart;
};

// Spherical (ab|cd) block, rows (a,b) and columns (c,d).
Matrix quartet(const ShellPair& bra, const ShellPair& ket, QuartetWorkspace& ws) {
  const int L = bra.L + ket.L;
  const int d = L + 1;
  const auto& hb = hermites(bra.L);
  const auto& hk = hermites(ket.L);
  const auto nb = static_cast<Eigen::Index>(hb.size());
  const auto nk = static_cast<Eigen::Index>(hk.size());
  const Eigen::Index ncart_bra = bra.sph.cols();
  const Eigen::Index ncart_ket = ket.sph.cols();
  ws.cart.setZero(ncart_bra, ncart_ket);
  ws.rmat.resize(nb, nk);
  ws.acc.resize(nb, ncart_ket);
  const double pi52 = 2.0 * std::pow(kPi, 2.5);
  for (const auto& pb : bra.prims) {
    ws.acc.setZero();
    for (const auto& pk : ket.prims) {
      const double p = pb.p;
      const double q = pk.p;
      const double alpha = p * q / (p + q);
      hermite_coulomb(L, alpha, pb.center - pk.center, ws.r, ws.scratch);
      const double pref = pi52 / (p * q * std::sqrt(p + q));
      for (Eigen::Index j = 0; j < nk; ++j) {
        const auto& hj = hk[static_cast<std::size_t>(j)];
        const double sign = ((hj.t + hj.u + hj.v) % 2) ? -pref : pref;
        for (Eigen::Index i = 0; i < nb; ++i) {
          const auto& hi = hb[static_cast<std::size_t>(i)];
          ws.rmat(i, j) = sign * ws.r[static_cast<std::size_t>(((hi.t + hj.t) * d + hi.u + hj.u) * d + hi.v + hj.v)];
        }
      }
      ws.acc.noalias() += ws.rmat * pk.e;
    }
    ws.cart.noalias() += pb.e.transpose() * ws.acc;
  }
  return bra.sph * ws.cart * ket.sph.transpose();
}

}  // namespace

Matrix spherical_transform(int l) {
  if (l < 0 || l > kMaxAngularMomentum)
    fail(ErrorKind::Input, "angular momentum l=" + std::to_string(l) + " is not supported (l <= 3)");
  const auto& cart = cartesians(l);
  auto col = [&](int x, int y, int z) {
    for (std::size_t k = 0; k < cart.size(); ++k)
      if (cart[k].x == x && cart[k].y == y && cart[k].z == z) return static_cast<Eigen::Index>(k);
    fail(ErrorKind::Numerical, "bad Cartesian power");
  };
  struct Term {
    int row;
    double c;
    int x, y, z;
  };
  std::vector<Term> terms;
  switch (l) {
    case 0:
      terms = {{0, 1, 0, 0, 0}};
      break;
    case 1:
      terms = {{0, 1, 1, 0, 0}, {1, 1, 0, 1, 0}, {2, 1, 0, 0, 1}};
      break;
    case 2:
      terms = {{0, 1, 1, 1, 0},  {1, 1, 0, 1, 1},  {2, 2, 0, 0, 2}, {2, -1, 2, 0, 0},
               {2, -1, 0, 2, 0}, {3, 1, 1, 0, 1},  {4, 1, 2, 0, 0}, {4, -1, 0, 2, 0}};
      break;
    default:
      terms = {{0, 3, 2, 1, 0},  {0, -1, 0, 3, 0},  {1, 1, 1, 1, 1},  {2, 4, 0, 1, 2},  {2, -1, 2, 1, 0},
               {2, -1, 0, 3, 0}, {3, 2, 0, 0, 3},   {3, -3, 2, 0, 1}, {3, -3, 0, 2, 1}, {4, 4, 1, 0, 2},
               {4, -1, 3, 0, 0}, {4, -1, 1, 2, 0},  {5, 1, 2, 0, 1},  {5, -1, 0, 2, 1}, {6, 1, 3, 0, 0},
               {6, -3, 1, 2, 0}};
  }
  Matrix t = Matrix::Zero(2 * l + 1, static_cast<Eigen::Index>(cart.size()));
  for (const auto& term : terms) t(term.row, col(term.x, term.y, term.z)) += term.c;
  return t;
}

std::vector<Shell> build_shells(const chem::Molecule& mol, const chem::BasisSet& basis) {
  basis.check_covers(mol);
  std::vector<Shell> out;
  int offset = 0;
  for (std::size_t ia = 0; ia < mol.atoms().size(); ++ia) {
    const auto& atom = mol.atoms()[ia];
    for (const auto& bs : basis.shells(atom.symbol)) {
      if (bs.l() > kMaxAngularMomentum)
        fail(ErrorKind::Input, "angular momentum l=" + std::to_string(bs.l()) + " on " + atom.symbol +
                                   " is not supported (l <= 3)");
      for (int c = 0; c < bs.n_contracted(); ++c) {
        Shell sh;
        sh.l = bs.l();
        sh.atom = static_cast<int>(ia);
        sh.offset = offset;
        sh.center = atom.position;
        for (int i = 0; i < bs.n_primitives(); ++i) {
          const double w = bs.coefficients()(i, c);
          if (w == 0.0) continue;
          const double alpha = bs.exponents()[static_cast<std::size_t>(i)];
          sh.exponents.push_back(alpha);
          sh.coefficients.push_back(w * primitive_norm(sh.l, alpha));
        }
        offset += sh.size();
        out.push_back(std::move(sh));
      }
    }
  }
  return out;
}

IntegralSet compute_one_electron(const chem::Molecule& mol, const chem::BasisSet& basis) {
  const auto shells = build_shells(mol, basis);
  const auto transforms = shell_transforms(shells);
  const int n = total_functions(shells);
  IntegralSet out;
  out.n_ao = n;
  out.overlap = Matrix::Zero(n, n);
  out.kinetic = Matrix::Zero(n, n);
  out.nuclear = Matrix::Zero(n, n);
  out.e_nuc = mol.nuclear_repulsion();
  for (std::size_t i = 0; i < shells.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const auto blocks = cartesian_one_body(shells[i], shells[j], &mol);
      const Matrix& ti = transforms[i];
      const Matrix& tj = transforms[j];
      const Matrix s = ti * blocks.s * tj.transpose();
      const Matrix t = ti * blocks.t * tj.transpose();
      const Matrix v = ti * blocks.v * tj.transpose();
      const int oi = shells[i].offset, oj = shells[j].offset;
      const int ni = shells[i].size(), nj = shells[j].size();
      out.overlap.block(oi, oj, ni, nj) = s;
      out.kinetic.block(oi, oj, ni, nj) = t;
      out.nuclear.block(oi, oj, ni, nj) = v;
      if (i != j) {
        out.overlap.block(oj, oi, nj, ni) = s.transpose();
        out.kinetic.block(oj, oi, nj, ni) = t.transpose();
        out.nuclear.block(oj, oi, nj, ni) = v.transpose();
      }
    }
  return out;
}

IntegralSet compute_integrals(const chem::Molecule& mol, const chem::BasisSet& basis,
                              const IntegralOptions& opts) {
  IntegralSet out = compute_one_electron(mol, basis);
  const auto shells = build_shells(mol, basis);
  const auto transforms = shell_transforms(shells);
  const int n = out.n_ao;
  out.eri = EriTensor(n);

  std::vector<ShellPair> pairs;
  for (int a = 0; a < static_cast<int>(shells.size()); ++a)
    for (int b = 0; b <= a; ++b) pairs.push_back(make_pair_data(shells, transforms, a, b));

  QuartetWorkspace ws;
  for (auto& pr : pairs) {
    const Matrix diag = quartet(pr, pr, ws);
    pr.bound = std::sqrt(diag.cwiseAbs().maxCoeff());
  }

  auto store = [&](const ShellPair& bra, const ShellPair& ket, const Matrix& block) {
    const Shell& a = shells[static_cast<std::size_t>(bra.a)];
    const Shell& b = shells[static_cast<std::size_t>(bra.b)];
    const Shell& c = shells[static_cast<std::size_t>(ket.a)];
    const Shell& d = shells[static_cast<std::size_t>(ket.b)];
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < b.size(); ++j)
        for (int k = 0; k < c.size(); ++k)
          for (int l = 0; l < d.size(); ++l)
            out.eri.set_symmetric(a.offset + i, b.offset + j, c.offset + k, d.offset + l,
                                  block(i * b.size() + j, k * d.size() + l));
  };

  const std::size_t n_pairs = pairs.size();
  auto work = [&](unsigned worker, unsigned n_workers) {
    QuartetWorkspace local;
    for (std::size_t ij = worker; ij < n_pairs; ij += n_workers)
      for (std::size_t kl = 0; kl <= ij; ++kl) {
        if (pairs[ij].bound * pairs[kl].bound < opts.schwarz_threshold) continue;
        store(pairs[ij], pairs[kl], quartet(pairs[ij], pairs[kl], local));
      }
  };
  const unsigned jobs = static_cast<unsigned>(std::max(1, opts.jobs));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w, jobs);
    for (auto& t : threads) t.join();
  }
  return out;
}

}  // namespace qpecost::integrals
