#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "convoy/errors.hpp"
#include "convoy/polynomial.hpp"
#include "convoy/qseries.hpp"
#include "convoy/scalar.hpp"

namespace convoy::genocchi {

// ---------------------------------------------------------------------------
// q-Hahn difference operator:  Delta_q f = (f(1+qx) - f(x)) / ((1+qx) - x).
// The division is exact because (A - B) divides f(A) - f(B); a nonzero
// remainder can only mean an arithmetic bug, so it is a hard error.
// ---------------------------------------------------------------------------

inline BiPoly q_hahn_delta(const BiPoly& f) {
  BiPoly num = f.compose_one_plus_qx() + f.negated();
  if (num.is_zero()) return {};
  const int deg = num.x_degree();
  if (deg < 1)
    throw std::logic_error("q_hahn_delta: numerator not divisible by 1+(q-1)x");
  // divide by 1 + (q-1)x from the constant term upward
  const LaurentPoly qm1 =
      LaurentPoly::monomial(1, 1) + LaurentPoly(mpz_class(-1));
  std::vector<LaurentPoly> quot(static_cast<std::size_t>(deg));
  quot[0] = num.x_coeff(0);
  for (int j = 1; j < deg; ++j)
    quot[j] = num.x_coeff(j) + (qm1 * quot[j - 1] * LaurentPoly(mpz_class(-1)));
  if (!(qm1 * quot[deg - 1] == num.x_coeff(deg)))
    throw std::logic_error("q_hahn_delta: nonzero remainder");
  return BiPoly::from_rows(std::move(quot));
}

// ---------------------------------------------------------------------------
// q-Gandhi polynomials: B_1 = 1, B_n = Delta_q(x^2 B_{n-1}).
// ---------------------------------------------------------------------------

inline BiPoly gandhi_poly(unsigned n) {
  if (n < 1) throw std::domain_error("gandhi_poly: n must be >= 1");
  BiPoly b(mpz_class(1));
  for (unsigned i = 2; i <= n; ++i) b = q_hahn_delta(b.shifted_x(2));
  return b;
}

// q-Genocchi numbers B_n(1,q) as polynomials in q, with B_0 := 1.
inline LaurentPoly q_genocchi(unsigned n) {
  if (n == 0) return LaurentPoly(mpz_class(1));
  return gandhi_poly(n).at_x1();
}

// B_0(1,q) .. B_n(1,q) in one pass of the Gandhi recurrence.
inline std::vector<LaurentPoly> genocchi_sequence(unsigned n) {
  std::vector<LaurentPoly> out;
  out.reserve(n + 1);
  out.push_back(LaurentPoly(mpz_class(1)));  // B_0
  BiPoly b(mpz_class(1));                    // B_1
  for (unsigned i = 1; i <= n; ++i) {
    if (i >= 2) b = q_hahn_delta(b.shifted_x(2));
    out.push_back(b.at_x1());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complete homogeneous symmetric polynomial h_m(args), h_0 = 1, via the
// splitting recurrence h_m(x_1..x_r) = h_m(x_1..x_{r-1}) + x_r h_{m-1}(x_1..x_r).
// ---------------------------------------------------------------------------

template <class S>
S hsym(unsigned m, const std::vector<S>& args) {
  const std::size_t r = args.size();
  if (m == 0) return S(1);
  if (r == 0) return S(0);
  std::vector<S> prev(r + 1, S(1));  // h_0 for every prefix
  std::vector<S> cur(r + 1, S(0));
  for (unsigned deg = 1; deg <= m; ++deg) {
    cur[0] = S(0);
    for (std::size_t i = 1; i <= r; ++i)
      cur[i] = cur[i - 1] + args[i - 1] * prev[i];
    std::swap(prev, cur);
  }
  return prev[r];
}

// ---------------------------------------------------------------------------
// Cross formula for B_n(1,q) built from homogeneous symmetric functions of
// [i]_q^2 / q^i.  Intermediate terms live in Laurent polynomials; all
// negative powers cancel in the final sum.
// ---------------------------------------------------------------------------

inline LaurentPoly genocchi_via_hsym(unsigned n) {
  if (n < 1) throw std::domain_error("genocchi_via_hsym: n must be >= 1");
  const LaurentPoly q = LaurentPoly::monomial(1, 1);
  // args[i] = [i+1]_q^2 q^{-(i+1)}
  std::vector<LaurentPoly> args;
  for (unsigned i = 1; i <= n; ++i) {
    LaurentPoly qi = qseries::q_number(i, q);
    LaurentPoly sq = qi * qi;
    args.push_back(sq * LaurentPoly::monomial(1, -static_cast<int>(i)));
  }
  LaurentPoly total;
  for (unsigned k = 0; k + 1 <= n; ++k) {
    const unsigned m = n - 1 - k;
    std::vector<LaurentPoly> prefix(args.begin(), args.begin() + k + 1);
    LaurentPoly h = hsym(m, prefix);
    LaurentPoly fact = qseries::q_factorial(k + 1, q);
    LaurentPoly term = h * fact * fact;
    const long tri = static_cast<long>(k) * (k + 1) / 2;
    term = term * LaurentPoly::monomial(((n - 1 - k) % 2 == 0) ? 1 : -1,
                                        static_cast<int>(-tri));
    total += term;
  }
  if (total.min_degree() < 0)
    throw std::logic_error("genocchi_via_hsym: negative powers did not cancel");
  return total;
}

// ---------------------------------------------------------------------------
// Surjective pistols: surjections p: {1..2n} -> {2,4,..,2n} with p(i) >= i.
// Enumeration by backtracking with a remaining-surjectivity prune; the hard
// size cap keeps the stream at desk scale (counts grow like Genocchi numbers).
// ---------------------------------------------------------------------------

struct Pistol {
  std::vector<int> values;  // values[i-1] = p(i), i = 1..2n
};

inline void enumerate_pistols(unsigned n,
                              const std::function<void(const Pistol&)>& visit) {
  if (n < 1) throw std::domain_error("enumerate_pistols: n must be >= 1");
  if (2 * n > 12)
    throw resource_error("enumerate_pistols: size 2n exceeds enumeration budget (12)");
  const int len = static_cast<int>(2 * n);
  Pistol p;
  p.values.assign(len, 0);
  std::vector<int> uses(n + 1, 0);  // uses[j] = multiplicity of value 2j
  int unused = static_cast<int>(n);

  std::function<void(int)> rec = [&](int pos) {
    if (pos > len) {
      if (unused == 0) visit(p);
      return;
    }
    // every value 2j < pos must already be used: later positions cannot reach it
    const int jmin = (pos + 1) / 2;  // smallest j with 2j >= pos
    for (int j = jmin; j <= static_cast<int>(n); ++j)
      if (2 * j < pos && uses[j] == 0) return;
    if (unused > len - pos + 1) return;  // not enough positions left
    for (int j = jmin; j <= static_cast<int>(n); ++j) {
      p.values[pos - 1] = 2 * j;
      if (uses[j]++ == 0) --unused;
      rec(pos + 1);
      if (--uses[j] == 0) ++unused;
    }
    p.values[pos - 1] = 0;
  };
  rec(1);
}

inline std::vector<Pistol> pistols(unsigned n) {
  std::vector<Pistol> out;
  enumerate_pistols(n, [&](const Pistol& p) { out.push_back(p); });
  return out;
}

// Special inversions: pairs (i,j) with i > j, p(i) < p(j), and i the
// rightmost position attaining the value p(i).
inline unsigned sinv(const Pistol& p) {
  const int len = static_cast<int>(p.values.size());
  unsigned count = 0;
  for (int i = 1; i < len; ++i) {
    bool rightmost = true;
    for (int k = i + 1; k < len; ++k)
      if (p.values[k] == p.values[i]) {
        rightmost = false;
        break;
      }
    if (!rightmost) continue;
    for (int j = 0; j < i; ++j)
      if (p.values[i] < p.values[j]) ++count;
  }
  return count;
}

// sum over pistols of q^sinv, as an exact polynomial
inline LaurentPoly pistol_sinv_polynomial(unsigned n) {
  LaurentPoly total;
  enumerate_pistols(n, [&](const Pistol& p) {
    total += LaurentPoly::monomial(1, static_cast<int>(sinv(p)));
  });
  return total;
}

// ---------------------------------------------------------------------------
// Catalan numbers, exact.
// ---------------------------------------------------------------------------

inline mpz_class catalan(unsigned n) {
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * n, n);
  return binom / (n + 1);
}

// ---------------------------------------------------------------------------
// Scalar evaluation of B_k(1,q).  At q = 0 the value is the Catalan number,
// which avoids building the full polynomial for large k.
// ---------------------------------------------------------------------------

template <class S>
S genocchi_eval(unsigned k, const S& q) {
  if (q == S(0)) return scalar_from_mpz<S>(catalan(k));
  return q_genocchi(k).eval(q);
}

// Evaluate B_0(1,q)..B_n(1,q) at a scalar q in one pass.
template <class S>
std::vector<S> genocchi_eval_sequence(unsigned n, const S& q) {
  std::vector<S> out;
  out.reserve(n + 1);
  if (q == S(0)) {
    for (unsigned k = 0; k <= n; ++k) out.push_back(scalar_from_mpz<S>(catalan(k)));
    return out;
  }
  for (const LaurentPoly& p : genocchi_sequence(n)) out.push_back(p.eval(q));
  return out;
}

}  // namespace convoy::genocchi
