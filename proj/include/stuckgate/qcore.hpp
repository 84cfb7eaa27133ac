#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "stuckgate/gates.hpp"

namespace stuckgate {

/// Dense state vectors become unwieldy long before this, but the circuits
/// simulated here never exceed three qubits.
inline constexpr int kMaxQubits = 8;

inline constexpr double kNormTol = 1e-10;
inline constexpr double kPhaseTol = 1e-10;

/// Normalized pure state on num_qubits qubits. Amplitude index i encodes the
/// basis ket by binary expansion with qubit 0 as the most significant bit,
/// so for two qubits |ab> lives at index 2a + b.
///
/// Values are immutable after construction; all operations below are pure
/// functions and never mutate their inputs.
class StateVector {
 public:
  /// Basis ket |index> on num_qubits qubits.
  static StateVector basis(int num_qubits, std::size_t index);

  /// a|0> + b|1>, normalized. Throws if the vector is zero or non-finite.
  static StateVector single_qubit(Complex a, Complex b);

  /// General constructor; the amplitude vector is normalized on entry.
  /// Throws std::invalid_argument on length mismatch, zero norm, or
  /// non-finite amplitudes.
  static StateVector from_amplitudes(int num_qubits,
                                     std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex amp(std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

 private:
  StateVector(int num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Hermitian, trace-one matrix over the same index convention as
/// StateVector. The constructor enforces hermiticity and unit trace within
/// 1e-10; positive semidefiniteness (eigenvalues >= -1e-10) is checked by
/// validate(), which is O(dim^3).
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, std::vector<Complex> entries);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return dim_; }
  const Complex& at(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  const std::vector<Complex>& entries() const { return entries_; }

  /// Throws std::invalid_argument if any eigenvalue is below -1e-10.
  void validate() const;

 private:
  int num_qubits_;
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// One outcome of a single-qubit measurement. post_state is empty for a
/// probability-zero branch; callers must not read it in that case.
struct MeasurementBranch {
  int outcome = 0;
  double probability = 0.0;
  std::optional<StateVector> post_state;
};

/// Kronecker product u (x) v; qubits of u become the most significant block.
StateVector tensor(const StateVector& u, const StateVector& v);

/// Applies `gate` to the ordered qubit list `targets` (identity elsewhere).
/// targets[0] is the most significant qubit of the gate's local index, so
/// cnot() applied to {c, t} uses qubit c as control. Throws on dimension
/// mismatch or duplicate/out-of-range targets.
StateVector apply_gate(const StateVector& state, const GateMatrix& gate,
                       const std::vector<int>& targets);

/// Pure-state density matrix |state><state|.
DensityMatrix to_density(const StateVector& state);

/// Traces out every qubit not in `keep`. The result indexes the kept qubits
/// in ascending original order. Throws if keep is empty, repeats a qubit, or
/// covers all qubits.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

/// Both Born branches for measuring qubit q in the computational basis,
/// outcome 0 first. Deterministic: sampling is the caller's job.
std::array<MeasurementBranch, 2> measure_qubit(const StateVector& state,
                                               int q);

/// True iff u = c v for some unit-modulus c, within tol in Euclidean norm.
/// The phase candidate is read off the largest-magnitude amplitude pairing.
bool equal_up_to_global_phase(const StateVector& u, const StateVector& v,
                              double tol = kPhaseTol);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps, descending.
std::vector<double> hermitian_eigenvalues(const DensityMatrix& rho);

}  // namespace stuckgate
