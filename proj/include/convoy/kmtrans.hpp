#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "convoy/params.hpp"
#include "convoy/qhermite.hpp"
#include "convoy/qseries.hpp"
#include "convoy/quadrature.hpp"

namespace convoy::kmtrans {

// ---------------------------------------------------------------------------
// Birth-death rates of the queue-length chain:
//   up(k) = c,  down(k) = c (1 - q^k),  stay(k) = 1 - c (2 - q^k).
// down(0) = 0, and the three always sum to 1.
// ---------------------------------------------------------------------------

struct BirthDeathSpec {
  ModelParams params;
  double up(unsigned) const { return params.c; }
  double down(unsigned k) const {
    return params.c * (1.0 - std::pow(params.q, static_cast<double>(k)));
  }
  double stay(unsigned k) const { return 1.0 - up(k) - down(k); }
};

// ---------------------------------------------------------------------------
// Truncated chain on {0..K}: the up-step at level K is folded into stay.
// Callers keep K >= start + n so the fold is unreachable and the powers are
// exact up to floating roundoff.
// ---------------------------------------------------------------------------

class TruncatedChain {
 public:
  TruncatedChain(unsigned K, const ModelParams& params) : K_(K), bd_{params} {}

  unsigned cap() const { return K_; }

  // one step of the distribution: v <- v P
  void step(std::vector<double>& v) const {
    const std::size_t size = K_ + 1;
    if (v.size() != size)
      throw std::invalid_argument("TruncatedChain::step: size mismatch");
    std::vector<double> next(size, 0.0);
    for (unsigned k = 0; k <= K_; ++k) {
      const double mass = v[k];
      if (mass == 0.0) continue;
      const double up = (k < K_) ? bd_.up(k) : 0.0;
      const double down = bd_.down(k);
      const double stay = 1.0 - up - down;  // fold at the cap
      next[k] += mass * stay;
      if (k < K_) next[k + 1] += mass * up;
      if (k > 0) next[k - 1] += mass * down;
    }
    v = std::move(next);
  }

 private:
  unsigned K_;
  BirthDeathSpec bd_;
};

// (P^n)_{i,j} by repeated matrix-vector application.
inline double matrix_transition(unsigned i, unsigned j, unsigned n,
                                const ModelParams& params, unsigned K) {
  if (K < i + n)
    throw std::invalid_argument(
        "matrix_transition: K must be >= i + n so truncation is unreachable");
  TruncatedChain chain(K, params);
  std::vector<double> v(K + 1, 0.0);
  v[i] = 1.0;
  for (unsigned s = 0; s < n; ++s) chain.step(v);
  return (j <= K) ? v[j] : 0.0;
}

// ---------------------------------------------------------------------------
// Spectral n-step transition probability
//   P(Q_{n+1} = j | Q_1 = i)
//     = (q;q)_j^{-1} int_{-1}^{1} (1-2c+2cz)^n H_i(z) H_j(z) w(z) dz,
// evaluated in theta = arccos z.  For large n the integrand concentrates on
// a scale 1/sqrt(n) near theta = 0, so the subdivision is seeded there.
// ---------------------------------------------------------------------------

inline double km_transition(unsigned i, unsigned j, unsigned n,
                            const ModelParams& params,
                            double quad_tol = 1e-10) {
  const double c = params.c;
  const double q = params.q;
  auto integrand = [&](double theta) {
    const double z = std::cos(theta);
    const double base = 1.0 - 2.0 * c + 2.0 * c * z;
    const double pw = (n == 0) ? 1.0 : std::pow(base, static_cast<double>(n));
    return pw * qhermite::h_eval(i, z, q) * qhermite::h_eval(j, z, q) *
           qhermite::weight_theta(theta, q, 1e-13);
  };
  std::vector<double> seeds;
  if (n >= 16) {
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (double f : {1.0, 10.0, 100.0, 1000.0}) {
      const double b = f * s;
      if (b < M_PI) seeds.push_back(b);
    }
  }
  const double integral =
      integrate_or_throw(integrand, 0.0, M_PI, quad_tol, 1e-12, 8000, seeds);
  return integral / qseries::qpoch_finite(q, q, j);
}

// ---------------------------------------------------------------------------
// Initial law pi_k = (q;q)_inf q^k / (q;q)_k, truncated when the geometric
// tail bound pi_k <= q^k drops below tail_tol.
// ---------------------------------------------------------------------------

inline std::vector<double> initial_law(double q, double tail_tol = 1e-14) {
  if (!(q >= 0.0 && q < 1.0))
    throw std::domain_error("initial_law: q must lie in [0,1)");
  std::vector<double> pi;
  double p = qseries::qpoch_infinite(q, q, 1e-15);
  double tail = (q > 0.0) ? q / (1.0 - q) : 0.0;  // sum_{j>k} q^j
  pi.push_back(p);
  unsigned k = 1;
  while (tail >= tail_tol && k < 100000) {
    p *= q / (1.0 - std::pow(q, static_cast<double>(k)));
    pi.push_back(p);
    tail *= q;
    ++k;
  }
  return pi;
}

struct DistributionResult {
  std::vector<double> law;   // law of Q_{n+1} on {0..K}
  double mean = 0.0;         // E[Q_{n+1}]
  double mean_gap = 0.0;     // E[Q_{n+1}] - E[Q_1]
};

// Law of Q_{n+1} started from the (truncated) initial law pi.
inline DistributionResult distribution_after_n(unsigned n,
                                               const ModelParams& params,
                                               double init_tail_tol = 1e-14,
                                               unsigned K_override = 0) {
  const std::vector<double> pi = initial_law(params.q, init_tail_tol);
  const unsigned k0 = static_cast<unsigned>(pi.size()) - 1;
  const unsigned K = K_override ? K_override : k0 + n;
  if (K < k0 + n)
    throw std::invalid_argument("distribution_after_n: K too small");
  TruncatedChain chain(K, params);
  std::vector<double> v(K + 1, 0.0);
  double mean1 = 0.0;
  for (unsigned k = 0; k < pi.size(); ++k) {
    v[k] = pi[k];
    mean1 += k * pi[k];
  }
  for (unsigned s = 0; s < n; ++s) chain.step(v);
  DistributionResult r;
  r.law = std::move(v);
  for (unsigned k = 0; k <= K; ++k) r.mean += k * r.law[k];
  r.mean_gap = r.mean - mean1;
  return r;
}

// ---------------------------------------------------------------------------
// Local limit: sqrt(n) P(Q_{n+1} = floor(y sqrt n) | Q_1 = 0) approaches the
// half-normal density exp(-y^2/(4c)) / sqrt(c pi).
// ---------------------------------------------------------------------------

inline double local_limit_density(double y, double c) {
  if (y < 0.0) throw std::domain_error("local_limit_density: y must be >= 0");
  if (!(c > 0.0 && c <= 0.25))
    throw std::domain_error("local_limit_density: c must lie in (0,1/4]");
  return std::exp(-y * y / (4.0 * c)) / std::sqrt(c * M_PI);
}

inline std::pair<double, double> local_limit_check(double y, unsigned n,
                                                   const ModelParams& params,
                                                   double quad_tol = 1e-9) {
  const auto j = static_cast<unsigned>(std::floor(y * std::sqrt(n)));
  const double scaled = std::sqrt(static_cast<double>(n)) *
                        km_transition(0, j, n, params, quad_tol);
  return {scaled, local_limit_density(y, params.c)};
}

}  // namespace convoy::kmtrans
