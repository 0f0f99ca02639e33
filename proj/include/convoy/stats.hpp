#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>

namespace convoy {

// ---------------------------------------------------------------------------
// Folded normal |N(0, sigma^2)|
// ---------------------------------------------------------------------------

inline double half_normal_pdf(double y, double variance) {
  if (y < 0.0) return 0.0;
  return std::sqrt(2.0 / (M_PI * variance)) * std::exp(-y * y / (2.0 * variance));
}

inline double half_normal_cdf(double y, double variance) {
  if (y <= 0.0) return 0.0;
  return std::erf(y / std::sqrt(2.0 * variance));
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distance of an integer-valued sample (given as a
// histogram value -> count) against a continuous CDF of value*scale.
// The sup over y is attained at the atoms, checking both one-sided gaps.
// ---------------------------------------------------------------------------

inline double ks_distance(const std::map<long, std::uint64_t>& histogram,
                          double scale,
                          const std::function<double(double)>& cdf) {
  std::uint64_t total = 0;
  for (const auto& [v, cnt] : histogram) total += cnt;
  if (total == 0) throw std::invalid_argument("ks_distance: empty histogram");
  double ks = 0.0;
  std::uint64_t cum = 0;
  for (const auto& [v, cnt] : histogram) {
    const double y = static_cast<double>(v) * scale;
    const double F = cdf(y);
    const double below = static_cast<double>(cum) / total;
    cum += cnt;
    const double upto = static_cast<double>(cum) / total;
    ks = std::max(ks, std::abs(F - below));
    ks = std::max(ks, std::abs(upto - F));
  }
  return ks;
}

// ---------------------------------------------------------------------------
// Chi-square tail probability via the regularized incomplete gamma Q(a,x).
// Series for x < a+1, continued fraction otherwise.
// ---------------------------------------------------------------------------

namespace detail {

inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum;
  for (int n = 1; n < 600; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 600; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

// P(Chi2_dof >= stat)
inline double chi_square_sf(double stat, double dof) {
  return gamma_q(0.5 * dof, 0.5 * stat);
}

// ---------------------------------------------------------------------------
// Mean / standard error of a histogram of integer outcomes.
// ---------------------------------------------------------------------------

struct MeanStderr {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t count = 0;
};

inline MeanStderr histogram_mean_stderr(
    const std::map<long, std::uint64_t>& histogram) {
  MeanStderr r;
  double sum = 0.0, sumsq = 0.0;
  for (const auto& [v, cnt] : histogram) {
    r.count += cnt;
    sum += static_cast<double>(v) * cnt;
    sumsq += static_cast<double>(v) * v * cnt;
  }
  if (r.count == 0) return r;
  r.mean = sum / r.count;
  if (r.count > 1) {
    const double var =
        (sumsq - sum * sum / r.count) / static_cast<double>(r.count - 1);
    r.stderr_mean = std::sqrt(std::max(var, 0.0) / r.count);
  }
  return r;
}

}  // namespace convoy
