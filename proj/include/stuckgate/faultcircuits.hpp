#pragma once

#include <array>
#include <optional>
#include <utility>

#include "stuckgate/qcore.hpp"

namespace stuckgate {

/// fig2 experiment: the mis-set gate sits on the upper (control) input.
///   upper |0> -- Hs(theta) --.--
///   lower |1> -- H ---------(+)--
/// The output stays a product state; the fault is confined to the upper
/// factor and can be undone locally by Z, Hs(theta), H, Z.
struct Fig2Result {
  StateVector joint_state;      // two qubits, Schmidt rank 1
  StateVector upper_state;      // extracted upper factor: cos t|0> - sin t|1>
  StateVector corrected_upper;  // after the local chain; (|0> - |1>)/sqrt(2)
};

/// fig3 experiment: the mis-set gate sits on the lower (target) input.
///   upper |0> -- H ----------.--
///   lower |1> -- Hs(theta) -(+)--
/// Away from theta = pi/4 the output is entangled, the reduced state of the
/// upper qubit is mixed, and no single-qubit unitary can repair it.
struct Fig3Result {
  StateVector joint_state;
  DensityMatrix rho_ab;  // joint density matrix
  DensityMatrix rho_a;   // reduced state of the upper qubit
  bool locally_correctable;
};

/// One pass of the one-classical-bit teleportation circuit with the mis-set
/// gate: input qubit X, entangled pair (Y, Z), CNOT(X->Y), CNOT(Y->Z),
/// Hs(theta) on X, then X is measured. x_plus / x_minus are the teleported
/// single-qubit states on Z for outcomes 0 / 1, proportional to
/// alpha cos t|0> + beta sin t|1> and alpha sin t|0> - beta cos t|1>; empty
/// for a probability-zero branch.
struct TeleportResult {
  StateVector premeasure_state;  // three qubits
  std::array<MeasurementBranch, 2> branches;
  std::optional<StateVector> x_plus;
  std::optional<StateVector> x_minus;
};

Fig2Result run_fig2(double theta);

Fig3Result run_fig3(double theta);

/// A reduced single-qubit state admits a local unitary correction only if it
/// is pure: true iff purity >= 1 - tol. Throws unless rho is 2x2.
bool is_locally_correctable(const DensityMatrix& rho_reduced,
                            double tol = 1e-9);

/// Requires |alpha|^2 + |beta|^2 = 1 within 1e-10.
TeleportResult teleport_once(Complex alpha, Complex beta, double theta);

/// Factors a two-qubit product state as upper (x) lower. The lower factor's
/// largest amplitude is made real positive; the upper factor absorbs the
/// remaining phase so that upper (x) lower reproduces the input exactly.
/// Throws if the state is entangled beyond tol (Schmidt rank > 1).
std::pair<StateVector, StateVector> split_product_state(
    const StateVector& state, double tol = 1e-10);

/// Schmidt coefficients (descending) of a two-qubit state across the
/// upper/lower cut. Rank 1 within tol means a product state.
std::array<double, 2> schmidt_coefficients(const StateVector& state);

}  // namespace stuckgate
