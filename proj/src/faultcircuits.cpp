#include "stuckgate/faultcircuits.hpp"

#include <cmath>
#include <stdexcept>

#include "stuckgate/infocomplexity.hpp"

namespace stuckgate {

namespace {

// Amplitudes of a 2-qubit state as a 2x2 matrix M[upper][lower].
std::array<std::array<Complex, 2>, 2> as_matrix(const StateVector& s) {
  return {{{s.amp(0), s.amp(1)}, {s.amp(2), s.amp(3)}}};
}

}  // namespace

std::array<double, 2> schmidt_coefficients(const StateVector& state) {
  if (state.num_qubits() != 2)
    throw std::invalid_argument("schmidt_coefficients: need a 2-qubit state");
  const auto m = as_matrix(state);
  // Singular values of M from the eigenvalues of M M^dagger (2x2).
  const double t = std::norm(m[0][0]) + std::norm(m[0][1]) +
                   std::norm(m[1][0]) + std::norm(m[1][1]);
  const Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double d = std::norm(det);
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d));
  const double hi = std::sqrt(std::max(0.0, (t + disc) / 2.0));
  const double lo = std::sqrt(std::max(0.0, (t - disc) / 2.0));
  return {hi, lo};
}

std::pair<StateVector, StateVector> split_product_state(
    const StateVector& state, double tol) {
  if (state.num_qubits() != 2)
    throw std::invalid_argument("split_product_state: need a 2-qubit state");
  if (schmidt_coefficients(state)[1] > tol)
    throw std::invalid_argument("split_product_state: state is entangled");

  const auto m = as_matrix(state);

  // The rows of M are multiples of the lower factor; take the larger one.
  const double r0 = std::norm(m[0][0]) + std::norm(m[0][1]);
  const double r1 = std::norm(m[1][0]) + std::norm(m[1][1]);
  const std::size_t row = r0 >= r1 ? 0 : 1;
  Complex v0 = m[row][0];
  Complex v1 = m[row][1];
  const double vnorm = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= vnorm;
  v1 /= vnorm;

  // Phase convention: the leading lower-factor amplitude is made real
  // positive. Near-ties in magnitude resolve to the lower index so that
  // one-ulp noise cannot flip the representative.
  const double m0 = std::abs(v0), m1 = std::abs(v1);
  const Complex lead = m0 >= std::max(m0, m1) * (1.0 - 1e-9) ? v0 : v1;
  const Complex rot = std::conj(lead) / std::abs(lead);
  v0 *= rot;
  v1 *= rot;

  // Project each row onto the unit lower factor to recover the upper one.
  const Complex u0 = m[0][0] * std::conj(v0) + m[0][1] * std::conj(v1);
  const Complex u1 = m[1][0] * std::conj(v0) + m[1][1] * std::conj(v1);

  return {StateVector::single_qubit(u0, u1), StateVector::single_qubit(v0, v1)};
}

Fig2Result run_fig2(double theta) {
  const StateVector input = tensor(StateVector::basis(1, 0),  // upper |0>
                                   StateVector::basis(1, 1));  // lower |1>
  StateVector s = apply_gate(input, stuck_hadamard(theta), {0});
  s = apply_gate(s, hadamard(), {1});
  s = apply_gate(s, cnot(), {0, 1});

  auto [upper, lower] = split_product_state(s);
  (void)lower;

  StateVector corrected = apply_gate(upper, pauli_z(), {0});
  corrected = apply_gate(corrected, stuck_hadamard(theta), {0});  // now |0>
  corrected = apply_gate(corrected, hadamard(), {0});
  corrected = apply_gate(corrected, pauli_z(), {0});

  return Fig2Result{s, upper, corrected};
}

Fig3Result run_fig3(double theta) {
  const StateVector input = tensor(StateVector::basis(1, 0),  // upper |0>
                                   StateVector::basis(1, 1));  // lower |1>
  StateVector s = apply_gate(input, hadamard(), {0});
  s = apply_gate(s, stuck_hadamard(theta), {1});
  s = apply_gate(s, cnot(), {0, 1});

  DensityMatrix rho_ab = to_density(s);
  DensityMatrix rho_a = partial_trace(rho_ab, {0});
  const bool correctable = is_locally_correctable(rho_a);
  return Fig3Result{s, std::move(rho_ab), std::move(rho_a), correctable};
}

bool is_locally_correctable(const DensityMatrix& rho_reduced, double tol) {
  if (rho_reduced.dim() != 2)
    throw std::invalid_argument(
        "is_locally_correctable: need a single-qubit density matrix");
  return purity(rho_reduced) >= 1.0 - tol;
}

TeleportResult teleport_once(Complex alpha, Complex beta, double theta) {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1.0) > kNormTol)
    throw std::invalid_argument("teleport_once: (alpha, beta) not normalized");

  const StateVector x = StateVector::single_qubit(alpha, beta);
  const StateVector pair = StateVector::from_amplitudes(
      2, {Complex{1.0, 0.0}, 0.0, 0.0, Complex{1.0, 0.0}});  // (|00>+|11>)/sqrt2

  StateVector s = tensor(x, pair);
  s = apply_gate(s, cnot(), {0, 1});
  s = apply_gate(s, cnot(), {1, 2});
  s = apply_gate(s, stuck_hadamard(theta), {0});

  auto branches = measure_qubit(s, 0);

  // For outcome x the state factors as |x> (|0>+|1>)/sqrt2 (c0|0>+c1|1>);
  // the Y=0 slice of the Z amplitudes is proportional to the teleported
  // state.
  auto slice = [&](int outcome) -> std::optional<StateVector> {
    if (branches[outcome].probability <= 1e-300) return std::nullopt;
    const std::size_t base = outcome == 0 ? 0 : 4;  // |x 0 z>
    return StateVector::single_qubit(s.amp(base + 0), s.amp(base + 1));
  };

  TeleportResult result{s, branches, slice(0), slice(1)};
  return result;
}

}  // namespace stuckgate
