#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "convoy/errors.hpp"
#include "convoy/qseries.hpp"
#include "convoy/quadrature.hpp"

namespace convoy::qhermite {

// ---------------------------------------------------------------------------
// Continuous big q-Hermite polynomials at a = 1, by the forward three-term
// recurrence H_{n+1} = (2x - q^n) H_n - (1 - q^n) H_{n-1}, H_0 = 1.
// Arguments outside [-1,1] are accepted (the recurrence is a polynomial);
// the orthogonality statements only cover [-1,1].
// ---------------------------------------------------------------------------

template <class S>
S h_eval(unsigned n, const S& x, const S& q) {
  S hm1(0), h(1);
  S qn(1);  // q^m
  for (unsigned m = 0; m < n; ++m) {
    S hnext = (S(2) * x - qn) * h - (S(1) - qn) * hm1;
    hm1 = h;
    h = hnext;
    qn *= q;
  }
  return h;
}

inline double h_eval(unsigned n, double x, double q) {
  return h_eval<double>(n, x, q);
}

// ---------------------------------------------------------------------------
// Orthogonality weight.  Two equivalent forms are implemented and
// cross-checked by tests:
//   (1) the modulus-ratio form  (q;q)_inf |(e^{2it};q)_inf|^2 /
//       (2 pi sqrt(1-x^2) |(e^{it};q)_inf|^2),
//   (2) the product form with h(x,a) = prod (1 - 2 a x q^k + a^2 q^{2k})
//       over a in {-1, sqrt(q), -sqrt(q)}.
// Both have the integrable 1/sqrt(1-x) singularity at x = 1; the theta
// substitution used by all quadratures cancels it.
// ---------------------------------------------------------------------------

// h(x, alpha) = prod_k (1 - 2 alpha x q^k + alpha^2 q^{2k}), |alpha| <= 1.
inline double h_product(double x, double alpha, double q, double tol) {
  if (alpha == 0.0) return 1.0;
  // |1 - factor| <= 3 |alpha| q^k, so tail below N is bounded by
  // 3 |alpha| q^N / (1-q).
  double bound = 3.0 * std::abs(alpha) / (1.0 - q);
  unsigned n = 0;
  while (bound >= 0.5 * tol && n < 100000000u) {
    bound *= q;
    ++n;
  }
  double result = 1.0, qk = 1.0;
  for (unsigned k = 0; k <= n; ++k) {
    result *= 1.0 - 2.0 * alpha * x * qk + alpha * alpha * qk * qk;
    qk *= q;
  }
  return result;
}

// weight w(x) * sin(theta) at x = cos(theta): the smooth part used by all
// integrals in the theta variable.
inline double weight_theta(double theta, double q, double tol = 1e-12) {
  const double x = std::cos(theta);
  const double qq = qseries::qpoch_infinite(q, q, tol / 3.0);
  const double sq = std::sqrt(q);
  return qq / (2.0 * M_PI) * h_product(x, -1.0, q, tol / 3.0) *
         h_product(x, sq, q, tol / 3.0) * h_product(x, -sq, q, tol / 3.0);
}

// product form (2)
inline double weight_w(double x, double q, double tol = 1e-12) {
  if (!(x > -1.0 && x < 1.0))
    throw std::domain_error("weight_w: x must lie in (-1,1)");
  const double theta = std::acos(x);
  return weight_theta(theta, q, tol) / std::sin(theta);
}

// modulus-ratio form (1)
inline double weight_w_qratio(double x, double q, double tol = 1e-12) {
  if (!(x > -1.0 && x < 1.0))
    throw std::domain_error("weight_w_qratio: x must lie in (-1,1)");
  const double theta = std::acos(x);
  using C = std::complex<double>;
  const C e1 = std::polar(1.0, theta);
  const C e2 = std::polar(1.0, 2.0 * theta);
  const double num = std::norm(qseries::qpoch_infinite(e2, q, tol / 4.0));
  const double den = std::norm(qseries::qpoch_infinite(e1, q, tol / 4.0));
  const double qq = qseries::qpoch_infinite(q, q, tol / 4.0);
  return qq / (2.0 * M_PI * std::sqrt(1.0 - x * x)) * num / den;
}

// ---------------------------------------------------------------------------
// Orthogonality integral: int_{-1}^{1} H_m H_n w dx, computed in theta.
// Equals delta_{mn} (q;q)_n.
// ---------------------------------------------------------------------------

inline double orthogonality_integral(unsigned m, unsigned n, double q,
                                     double quad_tol = 1e-10) {
  auto f = [&](double theta) {
    const double x = std::cos(theta);
    return h_eval(m, x, q) * h_eval(n, x, q) * weight_theta(theta, q, quad_tol * 1e-2);
  };
  return integrate_or_throw(f, 0.0, M_PI, quad_tol, 1e-12, 8000);
}

// ---------------------------------------------------------------------------
// Generating-function oracle: expand
//   (t;q)_inf / ((e^{it}t;q)_inf (e^{-it}t;q)_inf) = sum H_n(cos t)/(q;q)_n t^n
// as a truncated power series and recover H_0..H_N.  Independent of the
// recurrence path, so it serves as an oracle for h_eval.
// ---------------------------------------------------------------------------

inline std::vector<double> gf_coeff_oracle(double theta, double q, unsigned N,
                                           double tol = 1e-12) {
  if (N > 60) throw std::domain_error("gf_coeff_oracle: N must be <= 60");
  using C = std::complex<double>;
  const unsigned order = N + 1;
  // number of product factors needed so dropped factors perturb
  // coefficients below tol
  unsigned M = 1;
  {
    double b = 1.0 / (1.0 - q);
    while (b >= tol * 0.1 && M < 10000) {
      b *= q;
      ++M;
    }
  }
  std::vector<C> series(order, C(0.0));
  series[0] = C(1.0);
  auto mul_linear = [&](std::vector<C>& s, C a) {
    // s *= (1 - a t)
    for (unsigned i = order - 1; i >= 1; --i) s[i] -= a * s[i - 1];
  };
  auto mul_geometric = [&](std::vector<C>& s, C a) {
    // s *= 1/(1 - a t) = sum a^m t^m  (in place forward convolution)
    for (unsigned i = 1; i < order; ++i) s[i] += a * s[i - 1];
  };
  const C eip = std::polar(1.0, theta);
  const C eim = std::conj(eip);
  double qk = 1.0;
  for (unsigned k = 0; k < M; ++k) {
    mul_linear(series, C(qk));
    mul_geometric(series, eip * qk);
    mul_geometric(series, eim * qk);
    qk *= q;
  }
  std::vector<double> h(N + 1);
  double poch = 1.0;  // (q;q)_n
  double qn = q;
  for (unsigned n = 0; n <= N; ++n) {
    h[n] = series[n].real() * poch;
    poch *= 1.0 - qn;
    qn *= q;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Endpoint scaling: H_n(1 - u^2/(2n^2)) -> cos(u).  Returns the pair
// (polynomial value, target) for convergence checks.
// ---------------------------------------------------------------------------

inline std::pair<double, double> endpoint_limit_check(double u, double q,
                                                      unsigned n) {
  const double x = 1.0 - u * u / (2.0 * static_cast<double>(n) * n);
  return {h_eval(n, x, q), std::cos(u)};
}

}  // namespace convoy::qhermite
