#include "qpecost/basisopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qpecost::basisopt {

namespace {

double finite_or_inf(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0, const Vector& steps,
                          const SimplexOptions& opts) {
  const Eigen::Index n = x0.size();
  if (steps.size() != n) fail(ErrorKind::Input, "simplex step vector length mismatch");
  if (opts.max_iter < 0) fail(ErrorKind::Input, "simplex iteration cap must be >= 0");

  SimplexResult out;
  auto eval = [&](const Vector& x) {
    ++out.evaluations;
    const double v = finite_or_inf(f(x));
    if (std::isinf(v)) ++out.rejected;
    return SimplexPoint{x, v};
  };

  std::vector<SimplexPoint> s;
  s.push_back(eval(x0));
  out.trace.push_back(s.front());
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector x = x0;
    x[i] += steps[i];
    s.push_back(eval(x));
  }
  auto order = [&] {
    std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
  };
  order();
  if (std::isinf(s.front().f)) {
    out.best = s.front();
    out.termination = "all initial points rejected";
    return out;
  }
  if (n == 0) {
    out.best = s.front();
    out.termination = "no parameters";
    return out;
  }

  out.termination = "iteration cap";
  for (int it = 0; it < opts.max_iter; ++it) {
    double diameter = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
      diameter = std::max(diameter, (s[i].x - s[0].x).cwiseAbs().maxCoeff());
    if (std::isfinite(s.back().f) && s.back().f - s.front().f <= opts.f_tol && diameter <= opts.x_tol) {
      out.termination = "converged";
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) centroid += s[i].x;
    centroid /= static_cast<double>(n);
    const auto& worst = s.back();

    const auto refl = eval(centroid + opts.reflection * (centroid - worst.x));
    if (refl.f < s.front().f) {
      const auto exp = eval(centroid + opts.expansion * (refl.x - centroid));
      s.back() = exp.f < refl.f ? exp : refl;
    } else if (refl.f < s[s.size() - 2].f) {
      s.back() = refl;
    } else {
      const bool outside = refl.f < worst.f;
      const Vector target = outside ? refl.x : worst.x;
      const auto con = eval(centroid + opts.contraction * (target - centroid));
      if (con.f < (outside ? refl.f : worst.f)) {
        s.back() = con;
      } else {
        for (std::size_t i = 1; i < s.size(); ++i) s[i] = eval(s[0].x + opts.shrink * (s[i].x - s[0].x));
      }
    }
    order();
    out.trace.push_back(s.front());
  }
  out.best = s.front();
  return out;
}

}  // namespace qpecost::basisopt
