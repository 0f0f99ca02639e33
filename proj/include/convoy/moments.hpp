#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "convoy/genocchi.hpp"
#include "convoy/params.hpp"
#include "convoy/qseries.hpp"
#include "convoy/quadrature.hpp"
#include "convoy/scalar.hpp"

namespace convoy::moments {

// E_x[q^{k Q_1}] = (q;q)_k, independent of x.
template <class S>
S moment_q1(unsigned k, const S& q) {
  if (k < 1) throw std::domain_error("moment_q1: k must be >= 1");
  return qseries::qpoch_finite(q, q, k);
}

// ---------------------------------------------------------------------------
// Moment table m[i][k] = E_x[q^{k Q_i}] for 1 <= i <= n+1, 1 <= k <= n+2-i,
// filled by the three-term recursion
//   m[i+1][k] = (1 + c a_k) m[i][k] + c b_k m[i][k+1],
//   a_k = q^k + q^{-k} - 2,  b_k = 1 - q^{-k},
// seeded with m[1][k] = (q;q)_k.  q = 0 is rejected (a_k, b_k are singular
// there); use the TASEP hypergeometric path instead.
// ---------------------------------------------------------------------------

template <class S>
struct MomentTable {
  unsigned n = 0;
  // rows[i-1][k-1] = m[i][k]
  std::vector<std::vector<S>> rows;
  const S& at(unsigned i, unsigned k) const { return rows.at(i - 1).at(k - 1); }
};

// Exact rational fill.
inline MomentTable<mpq_class> build_moment_table(unsigned n,
                                                 const Params<mpq_class>& p) {
  if (n < 1) throw std::domain_error("build_moment_table: n must be >= 1");
  if (p.q == 0)
    throw std::domain_error(
        "build_moment_table: q = 0 is outside the recursion's domain; use the "
        "TASEP hypergeometric path");
  MomentTable<mpq_class> t;
  t.n = n;
  t.rows.resize(n + 1);
  t.rows[0].resize(n + 1);
  for (unsigned k = 1; k <= n + 1; ++k)
    t.rows[0][k - 1] = moment_q1(k, p.q);
  for (unsigned i = 1; i <= n; ++i) {
    const unsigned width = n + 1 - i;
    t.rows[i].resize(width);
    for (unsigned k = 1; k <= width; ++k) {
      const mpq_class qk = pow_int(p.q, static_cast<long>(k));
      const mpq_class qmk = pow_int(p.q, -static_cast<long>(k));
      const mpq_class ak = qk + qmk - 2;
      const mpq_class bk = 1 - qmk;
      t.rows[i][k - 1] =
          (1 + p.c * ak) * t.rows[i - 1][k - 1] + p.c * bk * t.rows[i - 1][k];
    }
  }
  return t;
}

// Floating-point entry.  A perturbation of m[i][k] propagates to m[i+1][k]
// multiplied by c q^{-k}, so rounding error grows exponentially down the
// table no matter how the q^{-k} factors are grouped.  Doubles are dyadic
// rationals, so the fill runs exactly over rationals of the inputs and
// rounds once at the end.
inline MomentTable<double> build_moment_table(unsigned n,
                                              const Params<double>& p) {
  if (n < 1) throw std::domain_error("build_moment_table: n must be >= 1");
  if (p.q == 0.0)
    throw std::domain_error(
        "build_moment_table: q = 0 is outside the recursion's domain; use the "
        "TASEP hypergeometric path");
  const Params<mpq_class> pr = make_params(mpq_class(p.q), mpq_class(p.x));
  const MomentTable<mpq_class> exact = build_moment_table(n, pr);
  MomentTable<double> t;
  t.n = n;
  t.rows.resize(exact.rows.size());
  for (std::size_t i = 0; i < exact.rows.size(); ++i) {
    t.rows[i].reserve(exact.rows[i].size());
    for (const mpq_class& v : exact.rows[i]) t.rows[i].push_back(v.get_d());
  }
  return t;
}

// E_x[Q_{n+1} - Q_1] = c * sum_{i=1}^{n} m[i][1]  (tower property).
template <class S>
S expected_convoy_dp(unsigned n, const Params<S>& p) {
  MomentTable<S> t = build_moment_table(n, p);
  S sum(0);
  for (unsigned i = 1; i <= n; ++i) sum += t.at(i, 1);
  return p.c * sum;
}

// ---------------------------------------------------------------------------
// Closed forms in terms of q-Genocchi numbers.  The summation uses the
// proof-derived indexing
//   E_x[q^{Q_{n+1}}]   = sum_{k=0}^{n}   (1-q)^{2k+1} (-c)^k C(n,k)   B_k(1,q)
//   E_x[Q_{n+1} - Q_1] = c sum_{k=0}^{n-1} (1-q)^{2k+1} (-c)^k C(n,k+1) B_k(1,q)
// which the dynamic-programming recursion above arbitrates.
// ---------------------------------------------------------------------------

template <class S>
S moment_qQn_closed(unsigned n, const Params<S>& p) {
  const std::vector<S> b = genocchi::genocchi_eval_sequence(n, p.q);
  const S omq = S(1) - p.q;
  S sum(0);
  S omq_pow = omq;          // (1-q)^{2k+1}
  S c_pow(1);               // (-c)^k
  for (unsigned k = 0; k <= n; ++k) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    sum += omq_pow * c_pow * scalar_from_mpz<S>(binom) * b[k];
    omq_pow *= omq * omq;
    c_pow *= -p.c;
  }
  return sum;
}

template <class S>
S expected_convoy_genocchi(unsigned n, const Params<S>& p) {
  if (n < 1) throw std::domain_error("expected_convoy_genocchi: n must be >= 1");
  const std::vector<S> b = genocchi::genocchi_eval_sequence(n - 1, p.q);
  const S omq = S(1) - p.q;
  S sum(0);
  S omq_pow = omq;
  S c_pow(1);
  for (unsigned k = 0; k < n; ++k) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, k + 1);
    sum += omq_pow * c_pow * scalar_from_mpz<S>(binom) * b[k];
    omq_pow *= omq * omq;
    c_pow *= -p.c;
  }
  return p.c * sum;
}

// ---------------------------------------------------------------------------
// Terminating Gauss hypergeometric sum, exact for rational inputs:
//   2F1(a,b;d;z) = sum_{k=0}^{-a} (a)_k (b)_k / ((d)_k k!) z^k,  a <= 0.
// ---------------------------------------------------------------------------

template <class S>
S hyp2f1_terminating(long a, const S& b, const S& d, const S& z) {
  if (a > 0) throw std::domain_error("hyp2f1_terminating: a must be <= 0");
  if constexpr (is_exact_scalar_v<S>) {
    for (long j = 0; j >= a; --j)
      if (d == S(j))
        throw std::domain_error("hyp2f1_terminating: d is a nonpositive integer");
  } else {
    if (d <= S(0) && std::abs(scalar_to_double(d) - std::round(scalar_to_double(d))) < 1e-12)
      throw std::domain_error("hyp2f1_terminating: d is a nonpositive integer");
  }
  const long kmax = -a;
  S sum(1), term(1);
  for (long k = 0; k < kmax; ++k) {
    term *= (S(a + k) * (b + S(k)) * z) / ((d + S(k)) * S(k + 1));
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// TASEP expected convoy size:  E = (2F1(-n,-1/2;1;4c) - 1) / 2.
// The exact path evaluates the terminating series; the floating path uses
// the contiguous three-term recurrence in n, whose wanted solution is the
// dominant one (growing like sqrt(n)), so forward recursion is stable and
// avoids the catastrophic cancellation of the alternating series at large n.
// ---------------------------------------------------------------------------

inline mpq_class expected_convoy_tasep(unsigned n, const mpq_class& x) {
  if (n < 1) throw std::domain_error("expected_convoy_tasep: n must be >= 1");
  if (!(x > 0 && x < 1))
    throw std::domain_error("expected_convoy_tasep: x must lie in (0,1)");
  const mpq_class c = x * (1 - x);
  const mpq_class f = hyp2f1_terminating<mpq_class>(
      -static_cast<long>(n), mpq_class(-1, 2), mpq_class(1), 4 * c);
  return (f - 1) / 2;
}

inline double expected_convoy_tasep(unsigned n, double x) {
  if (n < 1) throw std::domain_error("expected_convoy_tasep: n must be >= 1");
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("expected_convoy_tasep: x must lie in (0,1)");
  const long double z = 4.0L * static_cast<long double>(x) * (1.0L - x);
  // F_{m+1} = [(2m+1 - (m-1/2)z) F_m - m(1-z) F_{m-1}] / (m+1)
  long double fm1 = 1.0L;            // F_0
  long double fm = 1.0L + z / 2.0L;  // F_1
  for (unsigned m = 1; m < n; ++m) {
    const long double fnext =
        ((2.0L * m + 1.0L - (m - 0.5L) * z) * fm - m * (1.0L - z) * fm1) /
        (m + 1.0L);
    fm1 = fm;
    fm = fnext;
  }
  return static_cast<double>((fm - 1.0L) / 2.0L);
}

// sqrt(4 c n / pi): the universal large-n reference value.
inline double asymptotic_expected(unsigned n, double x) {
  const double c = x * (1.0 - x);
  return std::sqrt(4.0 * c * n / M_PI);
}

// sqrt(pi)/4: the unconditional (uniform-speed) normalizing constant.
inline double universal_constant() { return std::sqrt(M_PI) / 4.0; }

enum class Engine { dp, genocchi, tasep };

// Integral over the uniform speed coordinate x of the expected convoy size.
inline double unconditional_expected(unsigned n, double q, Engine engine,
                                     double tol = 1e-10) {
  auto f = [&](double x) -> double {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    switch (engine) {
      case Engine::tasep:
        return expected_convoy_tasep(n, x);
      case Engine::genocchi:
        return expected_convoy_genocchi(n, make_params(q, x));
      case Engine::dp:
      default:
        return expected_convoy_dp(n, make_params(q, x));
    }
  };
  if (engine != Engine::tasep && q == 0.0)
    throw std::domain_error(
        "unconditional_expected: q = 0 requires the TASEP engine");
  return integrate_or_throw(f, 0.0, 1.0, tol, 1e-10);
}

}  // namespace convoy::moments
