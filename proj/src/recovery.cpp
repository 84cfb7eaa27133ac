#include "stuckgate/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>

namespace stuckgate {

namespace {

constexpr double kRecoveryTol = 1e-10;

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Every trial gets its own substream so that sharding over threads can
// never change the outcome of any individual trial.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g{seed ^ ((index + 1) * 0xD1342543DE82EF95ull)};
  g.next();
  return g.next();
}

void check_normalized(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTol)
    throw std::invalid_argument("(alpha, beta) must be normalized");
}

// The recovery iteration keeps the state proportional to
// (alpha * u)|0> + (beta * v)|1> with real multipliers u, v. This checks,
// up to a global phase, whether that state equals alpha|0> + beta|1>.
bool recovered_state(double a2, double b2, double u, double v,
                     double tol = kRecoveryTol) {
  const double w = a2 * u * u + b2 * v * v;
  if (w <= 0.0) return false;
  const double inv = 1.0 / std::sqrt(w);
  const double phase = (a2 * std::abs(u) >= b2 * std::abs(v))
                           ? (u < 0.0 ? -1.0 : 1.0)
                           : (v < 0.0 ? -1.0 : 1.0);
  const double d0 = u * inv - phase;
  const double d1 = v * inv - phase;
  return std::sqrt(a2 * d0 * d0 + b2 * d1 * d1) <= tol;
}

std::vector<double> running_sums(const std::vector<PassProbability>& per_pass) {
  std::vector<double> cum;
  cum.reserve(per_pass.size());
  double acc = 0.0;
  for (const PassProbability& p : per_pass) {
    acc += p.probability;
    cum.push_back(acc);
  }
  return cum;
}

}  // namespace

Rational series_term(int n) {
  if (n < 1) throw std::invalid_argument("series_term: n must be >= 1");
  if (n > 30) throw std::length_error("series_term: n > 30 exceeds exact range");
  Rational term(1, 2 * n);
  for (int k = 1; k < n; ++k) term = term * Rational(2 * k - 1, 2 * k);
  return term;
}

Rational series_partial_sum(int n) {
  if (n < 1) throw std::invalid_argument("series_partial_sum: n must be >= 1");
  Rational sum(0);
  for (int k = 1; k <= n; ++k) sum = sum + series_term(k);
  return sum;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n)
    throw std::invalid_argument("binomial: need 0 <= k <= n");
  k = std::min(k, n - k);
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: numerator runs over i consecutive ints
    if (r > INT64_MAX) throw std::overflow_error("binomial: 64-bit overflow");
  }
  return static_cast<std::int64_t>(r);
}

RecoveryDistribution recovery_series(int passes) {
  if (passes < 1)
    throw std::invalid_argument("recovery_series: passes must be >= 1");
  if (passes > 30)
    throw std::length_error("recovery_series: passes > 30 exceeds exact range");
  RecoveryDistribution dist;
  dist.model = RecoveryModel::series;
  for (int n = 1; n <= passes; ++n) {
    const Rational t = series_term(n);
    dist.per_pass.push_back(PassProbability{n, t.to_double(), t, 0.0});
  }
  dist.cumulative = running_sums(dist.per_pass);
  dist.censored = (Rational(1) - series_partial_sum(passes)).to_double();
  return dist;
}

RecoveryDistribution first_passage_oracle(int walk_steps) {
  if (walk_steps < 1)
    throw std::invalid_argument("first_passage_oracle: need >= 1 step");
  if (walk_steps > 20)
    throw std::length_error("first_passage_oracle: enumeration limited to 20");

  const std::uint64_t sequences = std::uint64_t{1} << walk_steps;
  const int opportunities = walk_steps / 2;
  std::vector<std::int64_t> counts(opportunities + 1, 0);

  for (std::uint64_t seq = 0; seq < sequences; ++seq) {
    int d = 0;
    for (int t = 1; t <= walk_steps; ++t) {
      d += ((seq >> (t - 1)) & 1u) ? 1 : -1;
      if (d == 0) {  // tally balanced: pass t = 2n recovers at opportunity n
        ++counts[t / 2];
        break;
      }
    }
  }

  RecoveryDistribution dist;
  dist.model = RecoveryModel::oracle;
  Rational total(0);
  for (int n = 1; n <= opportunities; ++n) {
    const Rational p(counts[n], static_cast<std::int64_t>(sequences));
    total = total + p;
    dist.per_pass.push_back(PassProbability{n, p.to_double(), p, 0.0});
  }
  dist.cumulative = running_sums(dist.per_pass);
  dist.censored = (Rational(1) - total).to_double();
  return dist;
}

RecoveryDistribution exact_recovery_distribution(Complex alpha, Complex beta,
                                                 double theta, int max_passes) {
  check_normalized(alpha, beta);
  if (max_passes < 1)
    throw std::invalid_argument("exact_recovery_distribution: max_passes >= 1");
  if (max_passes > 30)
    throw std::length_error(
        "exact_recovery_distribution: max_passes limited to 30");

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);

  // Every outcome path ending with tallies (N0, N1) has the same
  // probability |alpha|^2 c^2N0 s^2N1 + |beta|^2 s^2N0 c^2N1, so it is
  // enough to count surviving paths per tally pair, level by level.
  auto node_weight = [&](int n0, int n1) {
    const double u = std::pow(c, n0) * std::pow(s, n1);
    const double v = std::pow(s, n0) * std::pow(c, n1);
    return a2 * u * u + b2 * v * v;
  };

  const int total_steps = 2 * max_passes;
  RecoveryDistribution dist;
  dist.model = RecoveryModel::exact_born;
  dist.per_pass.assign(static_cast<std::size_t>(max_passes),
                       PassProbability{});
  for (int n = 1; n <= max_passes; ++n) dist.per_pass[n - 1].pass = n;

  std::vector<std::uint64_t> survivors{1};  // level 0: tally (0, 0)
  for (int t = 1; t <= total_steps; ++t) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(t) + 1, 0);
    for (int n0 = 0; n0 < t; ++n0) {
      const std::uint64_t paths = survivors[n0];
      if (paths == 0) continue;
      next[n0 + 1] += paths;  // outcome 0
      next[n0] += paths;      // outcome 1
    }

    const int opportunity = (t + 1) / 2;
    for (int n0 = 0; n0 <= t; ++n0) {
      if (next[n0] == 0) continue;
      const int n1 = t - n0;
      const double u = std::pow(c, n0) * std::pow(s, n1);
      const double v = std::pow(s, n0) * std::pow(c, n1);
      if (n0 == n1 || recovered_state(a2, b2, u, v)) {
        dist.per_pass[opportunity - 1].probability +=
            static_cast<double>(next[n0]) * node_weight(n0, n1);
        next[n0] = 0;  // absorbed
      }
    }
    survivors = std::move(next);
  }

  double censored = 0.0;
  for (int n0 = 0; n0 <= total_steps; ++n0)
    if (survivors[n0] != 0)
      censored += static_cast<double>(survivors[n0]) *
                  node_weight(n0, total_steps - n0);
  dist.censored = censored;
  dist.cumulative = running_sums(dist.per_pass);
  return dist;
}

RecoveryDistribution monte_carlo_recovery(Complex alpha, Complex beta,
                                          double theta, std::uint64_t trials,
                                          std::uint64_t seed,
                                          SamplingModel model, int max_passes,
                                          int threads) {
  check_normalized(alpha, beta);
  if (trials < 1)
    throw std::invalid_argument("monte_carlo_recovery: trials must be >= 1");
  if (max_passes < 1)
    throw std::invalid_argument("monte_carlo_recovery: max_passes must be >= 1");

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const int total_steps = 2 * max_passes;

  const int workers = std::max(
      1, std::min<int>(threads, static_cast<int>(std::min<std::uint64_t>(
                                    trials, std::uint64_t{256}))));

  struct Tally {
    std::vector<std::uint64_t> recovered;
    std::uint64_t censored = 0;
  };
  std::vector<Tally> tallies(static_cast<std::size_t>(workers));
  for (Tally& t : tallies)
    t.recovered.assign(static_cast<std::size_t>(max_passes) + 1, 0);

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi, Tally& tally) {
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      SplitMix64 rng{substream_seed(seed, trial)};
      bool recovered = false;
      if (model == SamplingModel::idealized) {
        // Fair-coin tree: outcome tallies only.
        int d = 0;
        for (int t = 1; t <= total_steps; ++t) {
          d += rng.uniform01() < 0.5 ? 1 : -1;
          if (d == 0) {
            ++tally.recovered[static_cast<std::size_t>(t / 2)];
            recovered = true;
            break;
          }
        }
      } else {
        double u = 1.0, v = 1.0;
        int n0 = 0, n1 = 0;
        for (int t = 1; t <= total_steps; ++t) {
          const double w = a2 * u * u + b2 * v * v;
          const double uc = u * c, vs = v * s;
          const double p_plus = (a2 * uc * uc + b2 * vs * vs) / w;
          if (rng.uniform01() < p_plus) {
            u = uc;
            v = vs;
            ++n0;
          } else {
            u *= s;
            v *= c;
            ++n1;
          }
          const double m = std::max(std::abs(u), std::abs(v));
          u /= m;
          v /= m;
          if (n0 == n1 || recovered_state(a2, b2, u, v)) {
            ++tally.recovered[static_cast<std::size_t>((t + 1) / 2)];
            recovered = true;
            break;
          }
        }
      }
      if (!recovered) ++tally.censored;
    }
  };

  if (workers == 1) {
    run_range(0, trials, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
      const std::uint64_t hi = std::min(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi, std::ref(tallies[w]));
    }
    for (std::thread& t : pool) t.join();
  }

  // Fixed-order reduction over worker tallies.
  std::vector<std::uint64_t> recovered(static_cast<std::size_t>(max_passes) + 1,
                                       0);
  std::uint64_t censored = 0;
  for (const Tally& t : tallies) {
    for (std::size_t n = 0; n < recovered.size(); ++n)
      recovered[n] += t.recovered[n];
    censored += t.censored;
  }

  RecoveryDistribution dist;
  dist.model = RecoveryModel::monte_carlo;
  dist.sampling = model;
  dist.trials = trials;
  dist.seed = seed;
  const double nt = static_cast<double>(trials);
  for (int n = 1; n <= max_passes; ++n) {
    const double p = static_cast<double>(recovered[n]) / nt;
    const double se = std::sqrt(p * (1.0 - p) / nt);
    dist.per_pass.push_back(PassProbability{n, p, std::nullopt, se});
  }
  dist.cumulative = running_sums(dist.per_pass);
  dist.censored = static_cast<double>(censored) / nt;
  return dist;
}

QuantizedRecoverySummary quantized_recovery(Complex alpha, Complex beta,
                                            double theta_true,
                                            double receiver_delta,
                                            std::uint64_t trials,
                                            std::uint64_t seed,
                                            int max_passes) {
  check_normalized(alpha, beta);
  if (!(receiver_delta > 0.0) || !std::isfinite(receiver_delta))
    throw std::invalid_argument("quantized_recovery: delta must be positive");
  if (trials < 1)
    throw std::invalid_argument("quantized_recovery: trials must be >= 1");
  if (max_passes < 1)
    throw std::invalid_argument("quantized_recovery: max_passes must be >= 1");

  const double theta_hat =
      std::round(theta_true / receiver_delta) * receiver_delta;
  const double ct = std::cos(theta_true), st = std::sin(theta_true);
  const double ch = std::cos(theta_hat), sh = std::sin(theta_hat);
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const int total_steps = 2 * max_passes;

  double fid_sum = 0.0;
  double fid_min = 1.0;
  std::uint64_t declared = 0;

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    SplitMix64 rng{substream_seed(seed, trial)};
    // True multipliers evolve with the sender's theta on pass 1 and with
    // the receiver's rounded copy afterwards; the receiver's own model
    // multipliers use the rounded copy throughout.
    double u = 1.0, v = 1.0;    // true state
    double um = 1.0, vm = 1.0;  // receiver's model
    int n0 = 0, n1 = 0;

    for (int t = 1; t <= total_steps; ++t) {
      const double pc = t == 1 ? ct : ch;
      const double ps = t == 1 ? st : sh;
      const double w = a2 * u * u + b2 * v * v;
      const double uc = u * pc, vs = v * ps;
      const double p_plus = (a2 * uc * uc + b2 * vs * vs) / w;
      if (rng.uniform01() < p_plus) {
        u = uc;
        v = vs;
        um *= ch;
        vm *= sh;
        ++n0;
      } else {
        u *= ps;
        v *= pc;
        um *= sh;
        vm *= ch;
        ++n1;
      }
      const double m = std::max(std::abs(u), std::abs(v));
      u /= m;
      v /= m;
      const double mm = std::max(std::abs(um), std::abs(vm));
      if (mm > 0.0) {
        um /= mm;
        vm /= mm;
      }

      // The receiver declares on its own bookkeeping; it cannot see the
      // true state.
      if (n0 == n1 || recovered_state(a2, b2, um, vm)) {
        const double wf = a2 * u * u + b2 * v * v;
        const double overlap = a2 * u + b2 * v;
        const double fidelity = overlap * overlap / wf;
        fid_sum += fidelity;
        fid_min = std::min(fid_min, fidelity);
        ++declared;
        break;
      }
    }
  }

  QuantizedRecoverySummary summary;
  summary.theta_estimate = theta_hat;
  summary.trials = trials;
  summary.seed = seed;
  summary.declared_trials = declared;
  summary.declared_fraction =
      static_cast<double>(declared) / static_cast<double>(trials);
  summary.mean_fidelity =
      declared ? fid_sum / static_cast<double>(declared) : 0.0;
  summary.min_fidelity = declared ? fid_min : 0.0;
  return summary;
}

}  // namespace stuckgate
