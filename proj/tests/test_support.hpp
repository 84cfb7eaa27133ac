#pragma once

// Shared fixtures: a deterministic RNG for test data, closed-form state
// builders coded directly from the algebra (independent of the circuit
// engine), and a brute-force recovery tree that walks the full 3-qubit
// protocol instead of the multiplier bookkeeping used by the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "stuckgate/gates.hpp"
#include "stuckgate/qcore.hpp"

namespace testsupport {

using stuckgate::Complex;
using stuckgate::StateVector;

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }
  Complex unit_phase() {
    const double phi = uniform(0.0, 2.0 * M_PI);
    return {std::cos(phi), std::sin(phi)};
  }
};

// Random normalized amplitude pair with random phases.
inline std::pair<Complex, Complex> random_amplitude_pair(TestRng& rng) {
  const double p = rng.uniform(0.05, 0.95);
  const Complex alpha = std::sqrt(p) * rng.unit_phase();
  const Complex beta = std::sqrt(1.0 - p) * rng.unit_phase();
  return {alpha, beta};
}

inline StateVector random_state(TestRng& rng, int num_qubits) {
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  for (Complex& a : amps)
    a = Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return StateVector::from_amplitudes(num_qubits, std::move(amps));
}

inline double max_amp_diff(const StateVector& s,
                           const std::vector<Complex>& expected) {
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    worst = std::max(worst, std::abs(s.amp(i) - expected[i]));
  return worst;
}

// (cos t|0> - sin t|1>) (x) (|0> - |1>)/sqrt(2), written out directly.
inline std::vector<Complex> fig2_joint_closed_form(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double r = 1.0 / std::sqrt(2.0);
  return {c * r, -c * r, -s * r, s * r};
}

// (sin t|00> - cos t|01> - cos t|10> + sin t|11>)/sqrt(2).
inline std::vector<Complex> fig3_joint_closed_form(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double r = 1.0 / std::sqrt(2.0);
  return {s * r, -c * r, -c * r, s * r};
}

// Joint density matrix of the fig3 output, entry by entry.
inline std::vector<Complex> fig3_rho_ab_closed_form(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double s2 = s * s, c2 = c * c, sc = s * c;
  return {Complex{s2 / 2}, Complex{-sc / 2}, Complex{-sc / 2}, Complex{s2 / 2},
          Complex{-sc / 2}, Complex{c2 / 2}, Complex{c2 / 2}, Complex{-sc / 2},
          Complex{-sc / 2}, Complex{c2 / 2}, Complex{c2 / 2}, Complex{-sc / 2},
          Complex{s2 / 2},  Complex{-sc / 2}, Complex{-sc / 2},
          Complex{s2 / 2}};
}

// Pre-measurement state of one teleportation pass:
//   (1/sqrt2) |0>(|0>+|1>)(a cos t|0> + b sin t|1>)
// + (1/sqrt2) |1>(|0>+|1>)(a sin t|0> - b cos t|1>)
inline std::vector<Complex> teleport_premeasure_closed_form(Complex a,
                                                            Complex b,
                                                            double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double r = 1.0 / std::sqrt(2.0);
  const Complex plus0 = a * c * r, plus1 = b * s * r;
  const Complex minus0 = a * s * r, minus1 = -b * c * r;
  // index = 4x + 2y + z
  return {plus0, plus1, plus0, plus1, minus0, minus1, minus0, minus1};
}

inline StateVector bell_pair() {
  return StateVector::from_amplitudes(
      2, {Complex{1.0, 0.0}, 0.0, 0.0, Complex{1.0, 0.0}});
}

struct RecoveryTreeResult {
  std::vector<double> per_opportunity;
  double censored = 0.0;
};

namespace detail {

inline void recovery_tree_walk(const StateVector& phi, const StateVector& target,
                               double theta, int step, int max_steps,
                               double prob, RecoveryTreeResult& result) {
  using namespace stuckgate;
  StateVector s = tensor(phi, bell_pair());
  s = apply_gate(s, cnot(), {0, 1});
  s = apply_gate(s, cnot(), {1, 2});
  s = apply_gate(s, stuck_hadamard(theta), {0});
  const auto branches = measure_qubit(s, 0);

  for (const MeasurementBranch& br : branches) {
    if (!br.post_state) continue;
    const StateVector& post = *br.post_state;
    // The protocol leaves X collapsed and Y in (|0>+|1>)/sqrt2; read the
    // teleported qubit off the Y=0 slice and verify the factorization.
    const std::size_t base = br.outcome == 0 ? 0 : 4;
    StateVector out =
        StateVector::single_qubit(post.amp(base), post.amp(base + 1));
    const StateVector rebuilt = tensor(
        tensor(StateVector::basis(1, br.outcome),
               StateVector::single_qubit(1.0, 1.0)),
        out);
    if (!equal_up_to_global_phase(rebuilt, post, 1e-9))
      throw std::logic_error("recovery tree: unexpected post-measurement form");
    if (br.outcome == 1) out = apply_gate(out, pauli_z(), {0});

    const double p_path = prob * br.probability;
    if (p_path <= 0.0) continue;
    if (equal_up_to_global_phase(out, target, 1e-10)) {
      result.per_opportunity[static_cast<std::size_t>((step + 1) / 2 - 1)] +=
          p_path;
    } else if (step < max_steps) {
      recovery_tree_walk(out, target, theta, step + 1, max_steps, p_path,
                         result);
    } else {
      result.censored += p_path;
    }
  }
}

}  // namespace detail

// Brute-force distribution of the first recovery over `opportunities`
// balance points (2 * opportunities protocol passes), simulating every
// outcome sequence with full 3-qubit state vectors.
inline RecoveryTreeResult protocol_recovery_tree(Complex alpha, Complex beta,
                                                 double theta,
                                                 int opportunities) {
  RecoveryTreeResult result;
  result.per_opportunity.assign(static_cast<std::size_t>(opportunities), 0.0);
  const StateVector target = StateVector::single_qubit(alpha, beta);
  detail::recovery_tree_walk(target, target, theta, 1, 2 * opportunities, 1.0,
                             result);
  return result;
}

}  // namespace testsupport
