#include "stuckgate/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace stuckgate {

GateMatrix::GateMatrix(int dim, std::vector<Complex> entries,
                       std::string label)
    : dim_(dim), entries_(std::move(entries)), label_(std::move(label)) {
  if (dim_ != 2 && dim_ != 4)
    throw std::invalid_argument("GateMatrix: dim must be 2 or 4");
  if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw std::invalid_argument("GateMatrix: entry count does not match dim");
  for (const Complex& e : entries_)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw std::invalid_argument("GateMatrix: non-finite entry");
}

GateMatrix stuck_hadamard(double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("stuck_hadamard: theta must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return GateMatrix(2, {c, s, s, -c}, "Hs");
}

GateMatrix hadamard() {
  GateMatrix g = stuck_hadamard(M_PI / 4.0);
  return GateMatrix(2, g.entries(), "H");
}

GateMatrix pauli_z() { return GateMatrix(2, {1.0, 0.0, 0.0, -1.0}, "Z"); }

GateMatrix cnot() {
  return GateMatrix(4,
                    {1, 0, 0, 0,  //
                     0, 1, 0, 0,  //
                     0, 0, 0, 1,  //
                     0, 0, 1, 0},
                    "CNOT");
}

bool is_unitary(const GateMatrix& g, double tol) {
  const int d = g.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < d; ++k) acc += g.at(i, k) * std::conj(g.at(j, k));
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst <= tol;
}

}  // namespace stuckgate
