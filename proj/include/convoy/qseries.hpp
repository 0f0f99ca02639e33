#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace convoy::qseries {

// (a;q)_n = prod_{i=0}^{n-1} (1 - a q^i).  Exact when the scalar type is
// exact (e.g. mpq_class); q is unrestricted here since the product is finite.
template <class S>
S qpoch_finite(const S& a, const S& q, unsigned n) {
  S result(1);
  S aq = a;
  for (unsigned i = 0; i < n; ++i) {
    result *= S(1) - aq;
    aq *= q;
  }
  return result;
}

namespace detail {
inline double mag(double x) { return std::abs(x); }
inline double mag(const std::complex<double>& x) { return std::abs(x); }

// Truncation index: first N with |a| q^N / (1-q) < tol/2, so the dropped
// tail of the log-product is below tol.
inline unsigned trunc_index(double amag, double q, double tol) {
  if (amag == 0.0) return 0;
  double bound = amag / (1.0 - q);
  unsigned n = 0;
  while (bound >= 0.5 * tol && n < 100000000u) {
    bound *= q;
    ++n;
  }
  return n;
}
}  // namespace detail

// (a;q)_infty with relative error <= tol.  Requires 0 <= q < 1 and |a| <= 1.
template <class A>
A qpoch_infinite(const A& a, double q, double tol = 1e-14) {
  if (!(q >= 0.0 && q < 1.0))
    throw std::domain_error("qpoch_infinite: q must lie in [0,1)");
  if (detail::mag(a) > 1.0 + 1e-12)
    throw std::domain_error("qpoch_infinite: |a| must be <= 1");
  if (tol <= 0.0) throw std::domain_error("qpoch_infinite: tol must be > 0");
  const unsigned n = detail::trunc_index(detail::mag(a), q, tol);
  A result(1);
  A aq = a;
  for (unsigned i = 0; i < n; ++i) {
    result *= A(1) - aq;
    aq *= q;
  }
  return result;
}

// [n]_q = 1 + q + ... + q^{n-1}, evaluated as the polynomial (no division,
// so q = 1 and exact scalars are fine).
template <class S>
S q_number(unsigned n, const S& q) {
  S result(0);
  S p(1);
  for (unsigned i = 0; i < n; ++i) {
    result += p;
    p *= q;
  }
  return result;
}

// [n]_q! = prod_{i=1}^n [i]_q
template <class S>
S q_factorial(unsigned n, const S& q) {
  S result(1);
  for (unsigned i = 1; i <= n; ++i) result *= q_number(i, q);
  return result;
}

// Gamma_q(z) = (1-q)^{1-z} (q;q)_inf / (q^z;q)_inf,  q in (0,1), with
// q^z = exp(z ln q) on the principal branch (ln q is real and negative).
// Near q = 1 both infinite products underflow far past double range, so the
// ratio is accumulated as a sum of paired log factors.
inline std::complex<double> q_gamma(std::complex<double> z, double q,
                                    double tol = 1e-14) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("q_gamma: q must lie in (0,1)");
  if (z.imag() == 0.0 && z.real() <= 0.0 &&
      std::abs(z.real() - std::round(z.real())) < 1e-13)
    throw std::domain_error("q_gamma: pole at nonpositive integer z");
  const double lnq = std::log(q);
  const std::complex<double> qz = std::exp(z * lnq);
  const unsigned n = detail::trunc_index(std::max(std::abs(qz), q), q, tol);
  std::complex<double> logsum = 0.0;
  std::complex<double> num_arg = q, den_arg = qz;
  for (unsigned i = 0; i <= n; ++i) {
    logsum += std::log(1.0 - num_arg) - std::log(1.0 - den_arg);
    num_arg *= q;
    den_arg *= q;
  }
  return std::exp((1.0 - z) * std::log(1.0 - q) + logsum);
}

}  // namespace convoy::qseries
