#include "stuckgate/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stuckgate {

namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw std::invalid_argument("num_qubits out of range [1, 8]");
}

bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

double squared_norm(const std::vector<Complex>& v) {
  double acc = 0.0;
  for (const Complex& z : v) acc += std::norm(z);
  return acc;
}

}  // namespace

StateVector StateVector::basis(int num_qubits, std::size_t index) {
  check_qubit_count(num_qubits);
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  amps[index] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::single_qubit(Complex a, Complex b) {
  return from_amplitudes(1, {a, b});
}

StateVector StateVector::from_amplitudes(int num_qubits,
                                         std::vector<Complex> amplitudes) {
  check_qubit_count(num_qubits);
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (amplitudes.size() != dim)
    throw std::invalid_argument("amplitude count does not match qubit count");
  for (const Complex& z : amplitudes)
    if (!finite(z)) throw std::invalid_argument("non-finite amplitude");
  const double n2 = squared_norm(amplitudes);
  if (n2 < 1e-24) throw std::invalid_argument("cannot normalize zero vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& z : amplitudes) z *= inv;
  return StateVector(num_qubits, std::move(amplitudes));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

DensityMatrix::DensityMatrix(int num_qubits, std::vector<Complex> entries)
    : num_qubits_(num_qubits),
      dim_(std::size_t{1} << num_qubits),
      entries_(std::move(entries)) {
  check_qubit_count(num_qubits_);
  if (entries_.size() != dim_ * dim_)
    throw std::invalid_argument("DensityMatrix: wrong entry count");
  double trace = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      const Complex a = entries_[i * dim_ + j];
      const Complex b = entries_[j * dim_ + i];
      if (!finite(a) || !finite(b))
        throw std::invalid_argument("DensityMatrix: non-finite entry");
      if (std::abs(a - std::conj(b)) > 1e-10)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    trace += entries_[i * dim_ + i].real();
  }
  if (std::abs(trace - 1.0) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace must be 1");
}

void DensityMatrix::validate() const {
  for (double lambda : hermitian_eigenvalues(*this))
    if (lambda < -1e-10)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

StateVector tensor(const StateVector& u, const StateVector& v) {
  const int n = u.num_qubits() + v.num_qubits();
  check_qubit_count(n);
  std::vector<Complex> amps(u.dim() * v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j)
      amps[i * v.dim() + j] = u.amp(i) * v.amp(j);
  return StateVector::from_amplitudes(n, std::move(amps));
}

StateVector apply_gate(const StateVector& state, const GateMatrix& gate,
                       const std::vector<int>& targets) {
  const int n = state.num_qubits();
  const int k = static_cast<int>(targets.size());
  if (gate.dim() != (1 << k))
    throw std::invalid_argument("apply_gate: gate dim does not match targets");
  for (int t : targets)
    if (t < 0 || t >= n)
      throw std::invalid_argument("apply_gate: target out of range");
  for (std::size_t a = 0; a < targets.size(); ++a)
    for (std::size_t b = a + 1; b < targets.size(); ++b)
      if (targets[a] == targets[b])
        throw std::invalid_argument("apply_gate: duplicate target");

  // Bit position of each target in the amplitude index (qubit 0 is the MSB).
  std::vector<int> shift(targets.size());
  for (std::size_t a = 0; a < targets.size(); ++a)
    shift[a] = n - 1 - targets[a];

  const std::size_t dim = state.dim();
  const int local_dim = gate.dim();
  std::vector<Complex> out(dim, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < dim; ++i) {
    // Decompose i into the local index on the targets and the rest.
    int local = 0;
    std::size_t base = i;
    for (std::size_t a = 0; a < targets.size(); ++a) {
      const int bit = static_cast<int>((i >> shift[a]) & 1u);
      local = (local << 1) | bit;
      base &= ~(std::size_t{1} << shift[a]);
    }
    Complex acc = 0.0;
    for (int src = 0; src < local_dim; ++src) {
      const Complex g = gate.at(local, src);
      if (g == Complex{0.0, 0.0}) continue;
      std::size_t j = base;
      for (std::size_t a = 0; a < targets.size(); ++a) {
        const std::size_t bit = (src >> (targets.size() - 1 - a)) & 1;
        j |= bit << shift[a];
      }
      acc += g * state.amp(j);
    }
    out[i] = acc;
  }
  // Only unitary evolution is supported; a drifting norm means the caller
  // handed in a non-unitary matrix.
  if (std::abs(squared_norm(out) - 1.0) > 1e-9)
    throw std::invalid_argument("apply_gate: gate does not preserve the norm");
  return StateVector::from_amplitudes(n, std::move(out));
}

DensityMatrix to_density(const StateVector& state) {
  const std::size_t dim = state.dim();
  std::vector<Complex> entries(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      entries[i * dim + j] = state.amp(i) * std::conj(state.amp(j));
  return DensityMatrix(state.num_qubits(), std::move(entries));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  const int n = rho.num_qubits();
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (kept.empty()) throw std::invalid_argument("partial_trace: empty keep");
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw std::invalid_argument("partial_trace: repeated qubit");
  if (kept.front() < 0 || kept.back() >= n)
    throw std::invalid_argument("partial_trace: qubit out of range");
  if (static_cast<int>(kept.size()) == n)
    throw std::invalid_argument("partial_trace: keep must be a strict subset");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  const std::size_t out_dim = std::size_t{1} << nk;
  const std::size_t env_dim = std::size_t{1} << nt;

  // Rebuilds a full index from kept bits r and traced bits e.
  auto full_index = [&](std::size_t r, std::size_t e) {
    std::size_t idx = 0;
    for (int a = 0; a < nk; ++a) {
      const std::size_t bit = (r >> (nk - 1 - a)) & 1u;
      idx |= bit << (n - 1 - kept[a]);
    }
    for (int a = 0; a < nt; ++a) {
      const std::size_t bit = (e >> (nt - 1 - a)) & 1u;
      idx |= bit << (n - 1 - traced[a]);
    }
    return idx;
  };

  std::vector<Complex> out(out_dim * out_dim, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < out_dim; ++r)
    for (std::size_t c = 0; c < out_dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t e = 0; e < env_dim; ++e)
        acc += rho.at(full_index(r, e), full_index(c, e));
      out[r * out_dim + c] = acc;
    }
  return DensityMatrix(nk, std::move(out));
}

std::array<MeasurementBranch, 2> measure_qubit(const StateVector& state,
                                               int q) {
  const int n = state.num_qubits();
  if (q < 0 || q >= n)
    throw std::invalid_argument("measure_qubit: qubit out of range");
  const int shift = n - 1 - q;

  std::array<MeasurementBranch, 2> branches;
  for (int outcome = 0; outcome < 2; ++outcome) {
    double p = 0.0;
    std::vector<Complex> amps(state.dim(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < state.dim(); ++i) {
      if (static_cast<int>((i >> shift) & 1u) != outcome) continue;
      amps[i] = state.amp(i);
      p += std::norm(state.amp(i));
    }
    branches[outcome].outcome = outcome;
    branches[outcome].probability = p;
    // A zero-probability branch has no post state; renormalizing it would
    // divide by zero.
    if (p > 1e-300)
      branches[outcome].post_state =
          StateVector::from_amplitudes(n, std::move(amps));
  }
  return branches;
}

bool equal_up_to_global_phase(const StateVector& u, const StateVector& v,
                              double tol) {
  if (u.num_qubits() != v.num_qubits())
    throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
  // Pick the index where both amplitudes are largest together; the phase
  // candidate must make those two coincide.
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    const double mag = std::abs(u.amp(i)) * std::abs(v.amp(i));
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  Complex c{1.0, 0.0};
  if (best_mag > 0.0) {
    c = u.amp(best) / v.amp(best);
    const double m = std::abs(c);
    if (m == 0.0) return false;
    c /= m;
  }
  double diff2 = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i)
    diff2 += std::norm(u.amp(i) - c * v.amp(i));
  return std::sqrt(diff2) <= tol;
}

std::vector<double> hermitian_eigenvalues(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  std::vector<Complex> a = rho.entries();
  auto at = [&](std::size_t i, std::size_t j) -> Complex& {
    return a[i * d + j];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += std::norm(at(p, q));
    if (off < 1e-28) break;

    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double r = std::abs(at(p, q));
        if (r < 1e-300) continue;
        const Complex phase = at(p, q) / r;
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        // Rotation angle for the real 2x2 subproblem after the phase twist.
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = at(k, p);
          const Complex akq = at(k, q);
          at(k, p) = c * akp - s * std::conj(phase) * akq;
          at(k, q) = s * phase * akp + c * akq;
          at(p, k) = std::conj(at(k, p));
          at(q, k) = std::conj(at(k, q));
        }
        at(p, p) = app - t * r;
        at(q, q) = aqq + t * r;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eigs(d);
  for (std::size_t i = 0; i < d; ++i) eigs[i] = at(i, i).real();
  std::sort(eigs.rbegin(), eigs.rend());
  return eigs;
}

}  // namespace stuckgate
