#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "convoy/errors.hpp"

namespace convoy {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // estimated absolute error
  std::size_t evals = 0;
  bool converged = false;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
struct GK15 {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329,
      0.949107912342758524526189684047851,
      0.864864423359769072789712788640926,
      0.741531185599394439863864773280788,
      0.586087235467691130294144838258730,
      0.405845151377397166906606412076961,
      0.207784955007898467600689403773245,
      0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970,
      0.063092092629978553290700663189204,
      0.104790010322250183839876322541518,
      0.140653259715525918745189590510238,
      0.169004726639267902826583426598550,
      0.190350578064785409913256402421014,
      0.204432940075298892414161999234649,
      0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082,
      0.279705391489276667901467771423780,
      0.381830050505118944950369775488975,
      0.417959183673469387755102040816327};
};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_g = fc * GK15::wg[3];
  double res_k = fc * GK15::wgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * GK15::xgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    res_k += GK15::wgk[j] * fsum;
    if (j % 2 == 1) res_g += GK15::wg[j / 2] * fsum;
  }
  value = res_k * half;
  err = std::abs((res_k - res_g) * half);
  // sharpen the raw difference the usual QUADPACK way
  err = std::min(err, 200.0 * err * std::sqrt(std::max(err, 1e-300) * 200.0));
  if (!std::isfinite(err)) err = std::abs((res_k - res_g) * half);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b].  Optional breakpoints
// seed the initial subdivision; useful when the integrand has a known sharp
// feature (e.g. a peak of width 1/sqrt(n) at one endpoint) that plain
// bisection from [a,b] could step over.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                              double rel_tol = 1e-12,
                              std::size_t max_intervals = 4000,
                              const std::vector<double>& breakpoints = {}) {
  struct Seg {
    double a, b, value, error;
  };
  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  std::vector<Seg> segs;
  QuadResult out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Seg s{pts[i], pts[i + 1], 0.0, 0.0};
    detail::gk15(f, s.a, s.b, s.value, s.error);
    out.evals += 15;
    segs.push_back(s);
  }

  auto total = [&] {
    double v = 0, e = 0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
    }
    return std::pair<double, double>(v, e);
  };

  while (segs.size() < max_intervals) {
    auto [v, e] = total();
    if (e <= abs_tol || e <= rel_tol * std::abs(v)) {
      out.value = v;
      out.error = e;
      out.converged = true;
      return out;
    }
    // split the worst segment
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    Seg s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;  // interval exhausted at double precision
    Seg left{s.a, mid, 0, 0}, right{mid, s.b, 0, 0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    out.evals += 30;
    segs[worst] = left;
    segs.push_back(right);
  }
  auto [v, e] = total();
  out.value = v;
  out.error = e;
  out.converged = (e <= abs_tol || e <= rel_tol * std::abs(v));
  return out;
}

// Same but throws numeric_error when the tolerance was not reached.
template <class F>
double integrate_or_throw(const F& f, double a, double b, double abs_tol,
                          double rel_tol = 1e-12,
                          std::size_t max_intervals = 4000,
                          const std::vector<double>& breakpoints = {}) {
  QuadResult r =
      integrate_adaptive(f, a, b, abs_tol, rel_tol, max_intervals, breakpoints);
  if (!r.converged)
    throw numeric_error("adaptive quadrature did not converge", r.error);
  return r.value;
}

}  // namespace convoy
