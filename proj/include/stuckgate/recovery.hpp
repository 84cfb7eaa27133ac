#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stuckgate/qcore.hpp"
#include "stuckgate/rational.hpp"

namespace stuckgate {

// Iterative probabilistic recovery of a teleported state when the
// Hadamard-type gate is frozen at angle theta.
//
// Each protocol pass multiplies the |0> amplitude by cos t and the |1>
// amplitude by sin t (outcome 0), or by sin t and cos t after the
// outcome-conditioned Z fix (outcome 1). After N0 zero-outcomes and N1
// one-outcomes the state is proportional to
//     alpha cos^N0 sin^N1 |0> + beta sin^N0 cos^N1 |1>,
// so for generic theta the original state reappears exactly when the
// outcome tally balances (N0 == N1). Counting the sender's original pass as
// pass 1, balance is possible at passes 2, 4, 6, ...; per_pass[n] reports
// the probability that recovery first happens at the n-th such opportunity.
// When |cos t| == |sin t| every state is recoverable immediately and the
// whole mass lands on pass 1.

enum class RecoveryModel { series, oracle, exact_born, monte_carlo };

/// Branch statistics used by the Monte Carlo driver: `idealized` flips fair
/// coins (the probability-tree assumption), `exact_born` samples the true
/// outcome probabilities of the current state.
enum class SamplingModel { idealized, exact_born };

struct PassProbability {
  int pass = 0;                   // opportunity index, 1-based
  double probability = 0.0;       // first recovery exactly here
  std::optional<Rational> exact;  // present for series / oracle results
  double std_error = 0.0;         // binomial SE, Monte Carlo only
};

struct RecoveryDistribution {
  RecoveryModel model = RecoveryModel::series;
  SamplingModel sampling = SamplingModel::idealized;  // monte_carlo only
  std::vector<PassProbability> per_pass;
  std::vector<double> cumulative;  // running sums of per_pass
  double censored = 0.0;           // mass not recovered within the horizon
  std::uint64_t trials = 0;        // monte_carlo only
  std::uint64_t seed = 0;          // monte_carlo only
};

/// Term n >= 1 of the recovery series
///   1/2 + (1/2)(1/4) + (1/2)(3/4)(1/6) + (1/2)(3/4)(5/6)(1/8) + ...
/// i.e. prod_{k=1}^{n-1} (2k-1)/(2k) * 1/(2n), exactly.
Rational series_term(int n);

/// Sum of the first N series terms, by direct term summation. Equals
/// 1 - C(2N, N)/4^N.
Rational series_partial_sum(int n);

/// Exact binomial coefficient; throws std::overflow_error out of 64-bit
/// range.
std::int64_t binomial(int n, int k);

/// The series terms packaged as a RecoveryDistribution.
RecoveryDistribution recovery_series(int passes);

/// Independent check of the series by brute force: enumerates all 2^N
/// equiprobable outcome sequences of N passes (the sender's pass first) and
/// records the first pass at which the +/- outcome counts balance.
/// Probabilities are exact rationals with denominator 2^N; entry n covers
/// the n-th balance opportunity (pass 2n). N <= 20.
RecoveryDistribution first_passage_oracle(int walk_steps);

/// Exact distribution of the first recovery for the real protocol: a
/// breadth-first tree over outcome-count nodes with true Born branch
/// probabilities, recovery detected by balance bookkeeping plus a
/// phase-insensitive comparison against alpha|0> + beta|1>. max_passes (the
/// number of opportunities) <= 30. Cumulative mass can stay below 1: unlike
/// the fair-coin tree, the Born walk may drift off balance forever.
RecoveryDistribution exact_recovery_distribution(Complex alpha, Complex beta,
                                                 double theta, int max_passes);

/// Seeded Monte Carlo over recovery trials. Every trial draws from its own
/// counter-derived substream of `seed`, so results are bit-identical for a
/// fixed seed regardless of how trials are sharded across threads.
RecoveryDistribution monte_carlo_recovery(Complex alpha, Complex beta,
                                          double theta, std::uint64_t trials,
                                          std::uint64_t seed,
                                          SamplingModel model, int max_passes,
                                          int threads = 1);

struct QuantizedRecoverySummary {
  double theta_estimate = 0.0;    // receiver's rounded copy of theta
  double mean_fidelity = 0.0;     // over trials that declared recovery
  double min_fidelity = 0.0;      // over trials that declared recovery
  double declared_fraction = 0.0;
  std::uint64_t declared_trials = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Recovery with a receiver whose gate control has resolution
/// receiver_delta: the receiver iterates with theta rounded to the nearest
/// multiple of receiver_delta while the sender's pass used the true theta.
/// The receiver declares recovery on outcome balance; the summary reports
/// the fidelity |<target|state>|^2 at declaration. A theta below half the
/// resolution rounds to zero and the receiver's gate collapses the state.
QuantizedRecoverySummary quantized_recovery(Complex alpha, Complex beta,
                                            double theta_true,
                                            double receiver_delta,
                                            std::uint64_t trials,
                                            std::uint64_t seed,
                                            int max_passes = 50);

}  // namespace stuckgate
