#pragma once

#include <complex>
#include <string>
#include <vector>

namespace stuckgate {

using Complex = std::complex<double>;

/// Dense square unitary on one or two qubits (dim 2 or 4), row-major.
/// Construction does not enforce unitarity so that deliberately broken
/// matrices can be fed to is_unitary(); every constructor below produces a
/// unitary within 1e-10.
class GateMatrix {
 public:
  GateMatrix(int dim, std::vector<Complex> entries, std::string label);

  int dim() const { return dim_; }
  const Complex& at(int row, int col) const {
    return entries_[static_cast<std::size_t>(row) * dim_ + col];
  }
  const std::vector<Complex>& entries() const { return entries_; }
  const std::string& label() const { return label_; }

 private:
  int dim_;
  std::vector<Complex> entries_;
  std::string label_;
};

/// The mis-set Hadamard-family gate
///   [[cos t, sin t], [sin t, -cos t]]
/// frozen at control angle `theta` (radians). A reflection for every theta:
/// involutory, determinant -1. theta = pi/4 gives the standard Hadamard,
/// theta = 0 gives pauli_z.
GateMatrix stuck_hadamard(double theta);

/// Standard Hadamard; identical entrywise to stuck_hadamard(pi/4).
GateMatrix hadamard();

/// diag(1, -1).
GateMatrix pauli_z();

/// Controlled-NOT with the first qubit of the target list as control:
///   [[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]
GateMatrix cnot();

/// True iff max-norm of g * g^dagger - I is at most tol.
bool is_unitary(const GateMatrix& g, double tol = 1e-10);

}  // namespace stuckgate
