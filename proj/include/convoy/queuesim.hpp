#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "convoy/params.hpp"
#include "convoy/qseries.hpp"
#include "convoy/rng.hpp"
#include "convoy/scalar.hpp"
#include "convoy/stats.hpp"

namespace convoy::queuesim {

// ---------------------------------------------------------------------------
// Initial law pi_k = (q;q)_inf q^k / (q;q)_k, sampled by inverse CDF.
// The CDF is truncated at the first K whose geometric tail bound q^{K+1}/(1-q)
// falls below 1e-14; residual mass goes to the last level.
// ---------------------------------------------------------------------------

class InitialLawSampler {
 public:
  explicit InitialLawSampler(double q) {
    if (!(q >= 0.0 && q < 1.0))
      throw std::domain_error("InitialLawSampler: q must lie in [0,1)");
    double p = qseries::qpoch_infinite(q, q, 1e-15);
    double tail = (q > 0.0) ? q / (1.0 - q) : 0.0;
    cdf_.push_back(p);
    unsigned k = 1;
    while (tail >= 1e-14 && k < 100000) {
      p *= q / (1.0 - std::pow(q, static_cast<double>(k)));
      cdf_.push_back(cdf_.back() + p);
      tail *= q;
      ++k;
    }
  }

  long operator()(Xoshiro256& rng) const {
    const double r = rng.u01();
    // linear scan: the law decays geometrically, so the expected depth is O(1)
    for (std::size_t k = 0; k < cdf_.size(); ++k)
      if (r < cdf_[k]) return static_cast<long>(k);
    return static_cast<long>(cdf_.size()) - 1;
  }

 private:
  std::vector<double> cdf_;
};

inline long sample_pi(double q, Xoshiro256& rng) {
  return InitialLawSampler(q)(rng);
}

// ---------------------------------------------------------------------------
// One step of the coupled (queue, free walk) pair, driven by a single shared
// uniform; a second uniform is consumed only in the down branch, where the
// queue refuses the step with probability q^k.  Refusals is what marks a
// step as a convoy index.
// ---------------------------------------------------------------------------

struct CoupledState {
  long queue = 0;
  long walk = 0;
  long marks = 0;
};

namespace detail {
class QPowers {
 public:
  explicit QPowers(double q) : q_(q) { pow_.push_back(1.0); }
  double operator()(long k) {
    while (static_cast<long>(pow_.size()) <= k) pow_.push_back(pow_.back() * q_);
    return pow_[static_cast<std::size_t>(k)];
  }

 private:
  double q_;
  std::vector<double> pow_;
};
}  // namespace detail

inline bool step_coupled(CoupledState& s, const ModelParams& p,
                         Xoshiro256& rng, detail::QPowers& qpow) {
  const double r = rng.u01();
  if (r < p.c) {
    ++s.queue;
    ++s.walk;
    return false;
  }
  if (r < 1.0 - p.c) return false;
  --s.walk;
  const double r2 = rng.u01();
  if (r2 < qpow(s.queue)) {  // q^0 = 1: an empty queue always refuses
    ++s.marks;
    return true;
  }
  --s.queue;
  return false;
}

inline bool step_coupled(CoupledState& s, const ModelParams& p,
                         Xoshiro256& rng) {
  detail::QPowers qpow(p.q);
  return step_coupled(s, p, rng, qpow);
}

// ---------------------------------------------------------------------------
// Monte Carlo of the convoy count over n steps.  Replicate r draws from an
// independently keyed stream derived from (seed, r), so results are
// deterministic for a given (seed, reps, n, params) regardless of thread
// count or scheduling.
// ---------------------------------------------------------------------------

struct SimSummary {
  double q = 0.0, x = 0.0;
  std::uint64_t n = 0, reps = 0, seed = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::map<long, std::uint64_t> histogram;  // convoy count -> replicates
};

inline SimSummary convoy_mc(std::uint64_t n, const ModelParams& p,
                            std::uint64_t reps, std::uint64_t seed,
                            unsigned threads = 1) {
  if (reps < 1) throw std::domain_error("convoy_mc: reps must be >= 1");
  const InitialLawSampler sampler(p.q);

  auto run_block = [&](std::uint64_t r0, std::uint64_t r1,
                       std::map<long, std::uint64_t>& hist) {
    detail::QPowers qpow(p.q);
    for (std::uint64_t r = r0; r < r1; ++r) {
      Xoshiro256 rng = replica_stream(seed, r);
      CoupledState s;
      s.queue = s.walk = sampler(rng);
      for (std::uint64_t i = 0; i < n; ++i) {
        step_coupled(s, p, rng, qpow);
        if (s.marks != s.queue - s.walk)
          throw std::logic_error("convoy_mc: coupling identity violated");
        if (s.queue < 0)
          throw std::logic_error("convoy_mc: queue went negative");
      }
      ++hist[s.marks];
    }
  };

  std::map<long, std::uint64_t> hist;
  if (threads <= 1) {
    run_block(0, reps, hist);
  } else {
    const unsigned t = std::min<std::uint64_t>(threads, reps);
    std::vector<std::map<long, std::uint64_t>> partial(t);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (reps + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) {
      const std::uint64_t r0 = i * chunk;
      const std::uint64_t r1 = std::min<std::uint64_t>(reps, r0 + chunk);
      if (r0 >= r1) break;
      pool.emplace_back(run_block, r0, r1, std::ref(partial[i]));
    }
    for (auto& th : pool) th.join();
    for (const auto& ph : partial)
      for (const auto& [v, cnt] : ph) hist[v] += cnt;
  }

  SimSummary out;
  out.q = p.q;
  out.x = p.x;
  out.n = n;
  out.reps = reps;
  out.seed = seed;
  out.histogram = std::move(hist);
  const MeanStderr ms = histogram_mean_stderr(out.histogram);
  out.mean = ms.mean;
  out.stderr_mean = ms.stderr_mean;
  return out;
}

// ---------------------------------------------------------------------------
// Total weight of an offset path: sum over starting levels k of
// pi_k * prod_i P(k_i, k_{i+1}) along the increments `signs`.  A down step
// from level 0 carries probability c(1 - q^0) = 0, which kills every path
// that would cross below the axis.
// ---------------------------------------------------------------------------

template <class S>
S transition_factor(long level, int sign, const Params<S>& p) {
  if (sign > 0) return p.c;
  if (sign < 0) return p.c * (S(1) - pow_int(p.q, level));
  return S(1) - p.c * (S(2) - pow_int(p.q, level));
}

inline unsigned path_weight_levels(double q, double tail_tol) {
  unsigned K = 1;
  double tail = q / (1.0 - q);
  while (tail >= tail_tol && K < 100000) {
    tail *= q;
    ++K;
  }
  return K;
}

inline double path_weight(const std::vector<int>& signs, const ModelParams& p,
                          double tail_tol = 1e-14) {
  if (signs.size() > 10)
    throw std::domain_error("path_weight: path length capped at 10");
  const double q = p.q;
  const unsigned K = (q > 0.0) ? path_weight_levels(q, tail_tol) : 0;
  double total = 0.0;
  double pik = qseries::qpoch_infinite(q, q, 1e-15);
  for (unsigned k = 0; k <= K; ++k) {
    if (k > 0) pik *= q / (1.0 - std::pow(q, static_cast<double>(k)));
    double w = pik;
    long level = k;
    for (int sgn : signs) {
      w *= transition_factor(level, sgn, p);
      if (w == 0.0) break;
      level += sgn;
    }
    total += w;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Path-reversal identity: the forward sum equals q^{-s} times the sum over
// the reversed, negated sign sequence.  Numeric form returns both sides;
// the exact form compares partial sums (with matched caps, which is exact
// because reversed paths started below s have zero weight) over rationals
// with the common (q;q)_inf normalization factored out.
// ---------------------------------------------------------------------------

inline std::vector<int> reversed_negated(const std::vector<int>& signs) {
  std::vector<int> r(signs.rbegin(), signs.rend());
  for (int& v : r) v = -v;
  return r;
}

inline std::pair<double, double> reversal_check(const std::vector<int>& signs,
                                                const ModelParams& p) {
  if (signs.size() > 8)
    throw std::domain_error("reversal_check: path length capped at 8");
  long s = 0;
  for (int v : signs) s += v;
  const double lhs = path_weight(signs, p);
  const double rhs = path_weight(reversed_negated(signs), p);
  return {lhs, std::pow(p.q, static_cast<double>(-s)) * rhs};
}

inline bool reversal_check_exact(const std::vector<int>& signs,
                                 const Params<mpq_class>& p,
                                 unsigned k_max = 32) {
  if (signs.size() > 8)
    throw std::domain_error("reversal_check_exact: path length capped at 8");
  long s = 0;
  for (int v : signs) s += v;
  const std::vector<int> rev = reversed_negated(signs);
  // unnormalized pi: q^k / (q;q)_k
  auto pi_tilde = [&](long k) -> mpq_class {
    mpq_class v = pow_int(p.q, k);
    return v / qseries::qpoch_finite(p.q, p.q, static_cast<unsigned>(k));
  };
  auto partial = [&](const std::vector<int>& path, long cap) -> mpq_class {
    mpq_class total = 0;
    for (long k = 0; k <= cap; ++k) {
      mpq_class w = pi_tilde(k);
      long level = k;
      for (int sgn : path) {
        w *= transition_factor(level, sgn, p);
        if (w == 0) break;
        level += sgn;
      }
      total += w;
    }
    return total;
  };
  const mpq_class lhs = partial(signs, static_cast<long>(k_max));
  const mpq_class rhs = partial(rev, static_cast<long>(k_max) + s);
  return lhs == pow_int(p.q, -s) * rhs;
}

// ---------------------------------------------------------------------------
// TASEP (q = 0) diagnostics.
// ---------------------------------------------------------------------------

// Exact law of the folded free walk |P_n + 1/2| - 1/2 started at P_1 = 0,
// after n-1 steps.  Levels of the folded chain live on {0..n}.
inline std::vector<double> folded_walk_law(unsigned n, double x) {
  const double c = x * (1.0 - x);
  const long span = static_cast<long>(n) + 1;
  std::vector<double> walk(2 * span + 1, 0.0);  // index p + span
  walk[span] = 1.0;                             // P_1 = 0
  std::vector<double> next(walk.size());
  for (unsigned step = 1; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (long i = 1; i + 1 < static_cast<long>(walk.size()); ++i) {
      const double mass = walk[i];
      if (mass == 0.0) continue;
      next[i + 1] += mass * c;
      next[i - 1] += mass * c;
      next[i] += mass * (1.0 - 2.0 * c);
    }
    walk.swap(next);
  }
  std::vector<double> folded(n + 1, 0.0);
  for (long pidx = 0; pidx < static_cast<long>(walk.size()); ++pidx) {
    const long pval = pidx - span;
    const long f = (pval >= 0) ? pval : -1 - pval;
    if (f <= static_cast<long>(n)) folded[f] += walk[pidx];
  }
  return folded;
}

struct LumpingResult {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

// Chi-square comparison of the empirical law of Q_n (queue simulation at
// q = 0) against the exact folded-walk law.
inline LumpingResult lumping_check(unsigned n, double x, std::uint64_t samples,
                                   std::uint64_t seed) {
  if (n < 1) throw std::domain_error("lumping_check: n must be >= 1");
  const ModelParams p = make_params(0.0, x);
  std::vector<std::uint64_t> counts(n + 1, 0);
  detail::QPowers qpow(0.0);
  for (std::uint64_t r = 0; r < samples; ++r) {
    Xoshiro256 rng = replica_stream(seed, r);
    CoupledState s;  // q = 0: pi = delta_0
    for (unsigned i = 1; i < n; ++i) step_coupled(s, p, rng, qpow);
    counts[static_cast<std::size_t>(s.queue)]++;
  }
  const std::vector<double> law = folded_walk_law(n, x);
  // merge bins until the expected count is at least 5
  LumpingResult res;
  double exp_acc = 0.0;
  std::uint64_t obs_acc = 0;
  unsigned bins = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    exp_acc += law[k] * samples;
    obs_acc += counts[k];
    const bool last = (k == n);
    if (exp_acc >= 5.0 || last) {
      if (exp_acc > 0.0) {
        const double diff = obs_acc - exp_acc;
        res.statistic += diff * diff / exp_acc;
        ++bins;
      }
      exp_acc = 0.0;
      obs_acc = 0;
    }
  }
  res.dof = (bins > 1) ? bins - 1 : 1;
  res.p_value = chi_square_sf(res.statistic, res.dof);
  return res;
}

struct CrossingStats {
  double mean_down = 0.0;   // crossings 0 -> -1
  double mean_up = 0.0;     // crossings -1 -> 0
  double mean_local = 0.0;  // local time at 0
  std::map<long, std::uint64_t> total_histogram;  // D_n + E_n per replicate
};

// Free-walk crossing statistics at q = 0.  The convoy count of the folded
// realization equals D_n + E_n pathwise; this is asserted against the
// folded queue driven by the same stream.
inline CrossingStats tasep_crossing_stats(unsigned n, double x,
                                          std::uint64_t samples,
                                          std::uint64_t seed) {
  const double c = x * (1.0 - x);
  CrossingStats out;
  double sum_d = 0, sum_e = 0, sum_l = 0;
  for (std::uint64_t r = 0; r < samples; ++r) {
    Xoshiro256 rng = replica_stream(seed, r);
    long pos = 0;       // P_1 = 0
    long folded_q = 0;  // |P + 1/2| - 1/2
    long d = 0, e = 0, l = 0, marks = 0;
    for (unsigned k = 1; k <= n; ++k) {
      if (pos == 0) ++l;
      const double u = rng.u01();
      long next = pos;
      if (u < c) ++next;
      else if (u > 1.0 - c) --next;
      if (pos == 0 && next == -1) {
        ++d;
        ++marks;
      } else if (pos == -1 && next == 0) {
        ++e;
        ++marks;
      }
      pos = next;
      const long f = (pos >= 0) ? pos : -1 - pos;
      // folded coordinate is a queue trajectory; crossings are its refusals
      folded_q = f;
    }
    if (marks != d + e)
      throw std::logic_error("tasep_crossing_stats: crossing bookkeeping broke");
    (void)folded_q;
    sum_d += d;
    sum_e += e;
    sum_l += l;
    ++out.total_histogram[d + e];
  }
  out.mean_down = sum_d / samples;
  out.mean_up = sum_e / samples;
  out.mean_local = sum_l / samples;
  return out;
}

}  // namespace convoy::queuesim
