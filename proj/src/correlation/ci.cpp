#include "qpecost/correlation/ci.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

namespace qpecost::correlation {

const char* to_string(CILevel level) { return level == CILevel::FCI ? "FCI" : "CISD"; }

namespace {

constexpr OrbitalString kOne = 1;

bool occupied(OrbitalString s, int p) { return (s >> p) & 1; }

int popcount(OrbitalString s) {
  return std::popcount(static_cast<std::uint64_t>(s)) + std::popcount(static_cast<std::uint64_t>(s >> 64));
}

OrbitalString low_mask(int n) { return n >= 128 ? ~OrbitalString(0) : (kOne << n) - 1; }

// (-1)^(number of occupied orbitals below p)
double parity_below(OrbitalString s, int p) { return popcount(s & low_mask(p)) % 2 ? -1.0 : 1.0; }

void combinations(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

int top_level(int n_orb, int n_occ) { return std::min(n_occ, n_orb - n_occ); }

int total_level(CILevel level, int n_orb, int n_occ) {
  return level == CILevel::FCI ? 2 * top_level(n_orb, n_occ) : 2;
}

// Same-spin string Hamiltonian sum h a+a + 1/2 sum (pq|rs) a+a+aa in CSR form,
// columns ascending within each row.
struct StringHamiltonian {
  std::vector<std::size_t> row_start;
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  std::vector<double> diag;
};

// E_pq acting on a string: target string, pair index p*n+q and sign.
struct Single {
  std::uint32_t target;
  std::uint32_t pq;
  double sign;
};

struct SingleLists {
  std::vector<std::size_t> start;
  std::vector<Single> items;
};

std::vector<int> occupied_list(OrbitalString s, int n) {
  std::vector<int> out;
  for (int p = 0; p < n; ++p)
    if (occupied(s, p)) out.push_back(p);
  return out;
}

StringHamiltonian string_hamiltonian(const DeterminantSpace& space, const hamiltonian::MOHamiltonian& ham) {
  const int n = space.n_orb();
  const auto& v = ham.v;
  StringHamiltonian out;
  out.row_start.push_back(0);
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::size_t i = 0; i < space.n_strings(); ++i) {
    const OrbitalString s = space.strings()[i];
    const auto occ = occupied_list(s, n);
    std::vector<int> virt;
    for (int p = 0; p < n; ++p)
      if (!occupied(s, p)) virt.push_back(p);
    row.clear();

    double d = 0.0;
    for (int a : occ) {
      d += ham.h(a, a);
      for (int b : occ) d += 0.5 * (v(a, a, b, b) - v(a, b, b, a));
    }
    out.diag.push_back(d);
    row.emplace_back(static_cast<std::uint32_t>(i), d);

    for (int q : occ) {
      const OrbitalString s1 = s & ~(kOne << q);
      const double sq = parity_below(s, q);
      for (int p : virt) {
        const OrbitalString t = s1 | (kOne << p);
        const long j = space.find(t);
        if (j < 0) continue;
        double value = ham.h(p, q);
        for (int k : occ) value += v(p, q, k, k) - v(p, k, k, q);
        row.emplace_back(static_cast<std::uint32_t>(j), sq * parity_below(s1, p) * value);
      }
    }

    for (std::size_t a = 0; a < occ.size(); ++a)
      for (std::size_t b = a + 1; b < occ.size(); ++b) {
        const int q = occ[a], s_ = occ[b];
        const OrbitalString s1 = s & ~(kOne << q);
        const OrbitalString s2 = s1 & ~(kOne << s_);
        const double sign12 = parity_below(s, q) * parity_below(s1, s_);
        for (std::size_t c = 0; c < virt.size(); ++c)
          for (std::size_t e = c + 1; e < virt.size(); ++e) {
            const int p = virt[c], r = virt[e];
            const OrbitalString s3 = s2 | (kOne << r);
            const OrbitalString t = s3 | (kOne << p);
            const long j = space.find(t);
            if (j < 0) continue;
            // <t| a+_p a+_r a_s a_q |s>
            const double sign = sign12 * parity_below(s2, r) * parity_below(s3, p);
            const double value = v(p, q, r, s_) - v(p, s_, r, q);
            if (value != 0.0) row.emplace_back(static_cast<std::uint32_t>(j), sign * value);
          }
      }
    std::sort(row.begin(), row.end());
    for (const auto& [c, x] : row) {
      out.cols.push_back(c);
      out.vals.push_back(x);
    }
    out.row_start.push_back(out.cols.size());
  }
  return out;
}

SingleLists single_lists(const DeterminantSpace& space) {
  const int n = space.n_orb();
  SingleLists out;
  out.start.push_back(0);
  std::vector<Single> row;
  for (std::size_t i = 0; i < space.n_strings(); ++i) {
    const OrbitalString s = space.strings()[i];
    row.clear();
    for (int q = 0; q < n; ++q) {
      if (!occupied(s, q)) continue;
      row.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(q * n + q), 1.0});
      const OrbitalString s1 = s & ~(kOne << q);
      const double sq = parity_below(s, q);
      for (int p = 0; p < n; ++p) {
        if (occupied(s, p)) continue;
        const long j = space.find(s1 | (kOne << p));
        if (j < 0) continue;
        row.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(p * n + q), sq * parity_below(s1, p)});
      }
    }
    std::sort(row.begin(), row.end(), [](const Single& a, const Single& b) {
      return a.target != b.target ? a.target < b.target : a.pq < b.pq;
    });
    out.items.insert(out.items.end(), row.begin(), row.end());
    out.start.push_back(out.items.size());
  }
  return out;
}

class Sigma {
 public:
  Sigma(const DeterminantSpace& space, const hamiltonian::MOHamiltonian& ham)
      : space_(space), ham_(ham), strings_(string_hamiltonian(space, ham)), singles_(single_lists(space)) {}

  Vector diagonal() const {
    const int n = space_.n_orb();
    Vector d(static_cast<Eigen::Index>(space_.size()));
    std::vector<std::vector<int>> occ(space_.n_strings());
    for (std::size_t i = 0; i < space_.n_strings(); ++i) {
      for (int p = 0; p < n; ++p)
        if (occupied(space_.strings()[i], p)) occ[i].push_back(p);
    }
    for (std::size_t a = 0; a < space_.n_strings(); ++a)
      for (std::size_t b = 0; b < space_.width(a); ++b) {
        double value = ham_.e_core + strings_.diag[a] + strings_.diag[b];
        for (int i : occ[a])
          for (int j : occ[b]) value += ham_.v(i, i, j, j);
        d(static_cast<Eigen::Index>(space_.offset(a) + b)) = value;
      }
    return d;
  }

  void apply(const Vector& c, Vector& sigma) const {
    sigma = ham_.e_core * c;
    const Matrix& m = ham_.v.matrix();
    const std::size_t ns = space_.n_strings();
    for (std::size_t ia = 0; ia < ns; ++ia) {
      const std::size_t w = space_.width(ia);
      double* out = sigma.data() + space_.offset(ia);
      // alpha-alpha
      for (std::size_t k = strings_.row_start[ia]; k < strings_.row_start[ia + 1]; ++k) {
        const std::size_t ja = strings_.cols[k];
        const std::size_t len = std::min(w, space_.width(ja));
        const double val = strings_.vals[k];
        const double* in = c.data() + space_.offset(ja);
        for (std::size_t b = 0; b < len; ++b) out[b] += val * in[b];
      }
      // beta-beta
      const double* row = c.data() + space_.offset(ia);
      for (std::size_t ib = 0; ib < w; ++ib) {
        double acc = 0.0;
        for (std::size_t k = strings_.row_start[ib]; k < strings_.row_start[ib + 1]; ++k) {
          const std::size_t jb = strings_.cols[k];
          if (jb >= w) break;
          acc += strings_.vals[k] * row[jb];
        }
        out[ib] += acc;
      }
    }
    // alpha-beta: sum (pq|rs) E^a_pq E^b_rs, driven by the source determinant.
    for (std::size_t ja = 0; ja < ns; ++ja) {
      const std::size_t wj = space_.width(ja);
      const double* in = c.data() + space_.offset(ja);
      for (std::size_t k = singles_.start[ja]; k < singles_.start[ja + 1]; ++k) {
        const Single& sa = singles_.items[k];
        const std::size_t wi = space_.width(sa.target);
        double* out = sigma.data() + space_.offset(sa.target);
        const double* vcol = m.col(sa.pq).data();
        for (std::size_t jb = 0; jb < wj; ++jb) {
          const double cj = in[jb] * sa.sign;
          if (cj == 0.0) continue;
          for (std::size_t l = singles_.start[jb]; l < singles_.start[jb + 1]; ++l) {
            const Single& sb = singles_.items[l];
            if (sb.target >= wi) break;
            out[sb.target] += vcol[sb.pq] * sb.sign * cj;
          }
        }
      }
    }
  }

 private:
  const DeterminantSpace& space_;
  const hamiltonian::MOHamiltonian& ham_;
  StringHamiltonian strings_;
  SingleLists singles_;
};

void davidson(const Sigma& sigma, const Vector& diag, const CIOptions& opts, CIResult& res) {
  const Eigen::Index dim = diag.size();
  const int max_sub = std::max(4, opts.max_subspace);
  Matrix basis(dim, max_sub), images(dim, max_sub);
  Eigen::Index guess = 0;
  diag.minCoeff(&guess);
  basis.col(0).setZero();
  basis(guess, 0) = 1.0;
  Vector tmp;
  sigma.apply(basis.col(0), tmp);
  images.col(0) = tmp;
  int m = 1;
  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it + 1;
    const Matrix sub = basis.leftCols(m).transpose() * images.leftCols(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sub + sub.transpose()));
    const double theta = es.eigenvalues()(0);
    const Vector y = es.eigenvectors().col(0);
    const Vector x = basis.leftCols(m) * y;
    const Vector ax = images.leftCols(m) * y;
    Vector r = ax - theta * x;
    res.energy = theta;
    res.residual = r.norm();
    if (res.residual <= opts.residual_tol) {
      res.converged = true;
      res.vector = x;
      return;
    }
    if (m == max_sub) {
      basis.col(0) = x.normalized();
      images.col(0) = ax / x.norm();
      m = 1;
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      double d = theta - diag(k);
      if (std::abs(d) < 1e-8) d = d < 0 ? -1e-8 : 1e-8;
      r(k) /= d;
    }
    for (int pass = 0; pass < 2; ++pass) r -= basis.leftCols(m) * (basis.leftCols(m).transpose() * r);
    const double norm = r.norm();
    if (norm < 1e-14) {
      res.converged = res.residual <= 10 * opts.residual_tol;
      res.vector = x;
      if (!res.converged) fail(ErrorKind::Convergence, "Davidson subspace collapsed before convergence");
      return;
    }
    basis.col(m) = r / norm;
    sigma.apply(basis.col(m), tmp);
    images.col(m) = tmp;
    ++m;
  }
  fail(ErrorKind::Convergence, "Davidson did not converge in " + std::to_string(opts.max_iter) +
                                   " iterations (residual " + std::to_string(res.residual) + ")");
}

}  // namespace

DeterminantSpace::DeterminantSpace(int n_orb, int n_occ, int max_total_level) : n_orb_(n_orb), n_occ_(n_occ) {
  if (n_orb > 128) fail(ErrorKind::Capacity, "determinant strings support at most 128 orbitals");
  if (n_occ < 0 || n_occ > n_orb) fail(ErrorKind::Input, "invalid occupied count for the determinant space");
  const int n_virt = n_orb - n_occ;
  const int top = std::min(max_total_level, top_level(n_orb, n_occ));
  const OrbitalString ref = low_mask(n_occ);
  std::vector<std::size_t> prefix(static_cast<std::size_t>(top) + 1, 0);
  for (int k = 0; k <= top; ++k) {
    combinations(n_occ, k, [&](const std::vector<int>& holes) {
      combinations(n_virt, k, [&](const std::vector<int>& parts) {
        OrbitalString s = ref;
        for (int h : holes) s &= ~(kOne << h);
        for (int a : parts) s |= kOne << (n_occ + a);
        index_.emplace(s, static_cast<long>(strings_.size()));
        strings_.push_back(s);
        levels_.push_back(k);
      });
    });
    prefix[static_cast<std::size_t>(k)] = strings_.size();
  }
  width_.resize(strings_.size());
  offset_.resize(strings_.size());
  for (std::size_t i = 0; i < strings_.size(); ++i) {
    width_[i] = prefix[static_cast<std::size_t>(std::min(top, max_total_level - levels_[i]))];
    offset_[i] = total_;
    total_ += width_[i];
  }
}

long DeterminantSpace::find(OrbitalString s) const {
  const auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

std::size_t count_determinants(int n_orb, int n_elec, CILevel level) {
  const int o = n_elec / 2;
  const int v = n_orb - o;
  const int top = top_level(n_orb, o);
  const int max_total = total_level(level, n_orb, o);
  std::vector<double> per_level(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) per_level[static_cast<std::size_t>(k)] = binomial(o, k) * binomial(v, k);
  double total = 0.0;
  for (int ka = 0; ka <= top; ++ka)
    for (int kb = 0; kb <= top; ++kb)
      if (ka + kb <= max_total)
        total += per_level[static_cast<std::size_t>(ka)] * per_level[static_cast<std::size_t>(kb)];
  if (total > 1.8e19) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(total);
}

CIResult run_ci(const hamiltonian::MOHamiltonian& ham, CILevel level, const CIOptions& opts) {
  if (ham.n_elec % 2 != 0) fail(ErrorKind::Input, "determinant CI supports closed-shell (MS = 0) systems only");
  const int n = ham.n_orb();
  const int o = ham.n_elec / 2;
  if (o > n) fail(ErrorKind::Input, "more electron pairs than orbitals");
  const std::size_t count = count_determinants(n, ham.n_elec, level);
  const std::size_t cap = level == CILevel::FCI ? opts.max_fci_determinants : opts.max_cisd_determinants;
  if (count > cap)
    fail(ErrorKind::Capacity, std::string(to_string(level)) + " space of " + std::to_string(count) +
                                  " determinants exceeds the cap of " + std::to_string(cap));
  if (n > 128) fail(ErrorKind::Capacity, "determinant strings support at most 128 orbitals");

  const DeterminantSpace space(n, o, total_level(level, n, o));
  CIResult res;
  res.level = level;
  res.n_determinants = space.size();
  const Sigma sigma(space, ham);
  const Vector diag = sigma.diagonal();

  if (space.size() <= opts.dense_limit) {
    const auto dim = static_cast<Eigen::Index>(space.size());
    Matrix h(dim, dim);
    Vector unit = Vector::Zero(dim), col;
    for (Eigen::Index k = 0; k < dim; ++k) {
      unit(k) = 1.0;
      sigma.apply(unit, col);
      h.col(k) = col;
      unit(k) = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.transpose()));
    res.energy = es.eigenvalues()(0);
    res.vector = es.eigenvectors().col(0);
    res.converged = true;
    res.residual = 0.0;
    return res;
  }
  davidson(sigma, diag, opts, res);
  return res;
}

}  // namespace qpecost::correlation
