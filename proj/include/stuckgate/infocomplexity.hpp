#pragma once

#include <vector>

#include "stuckgate/qcore.hpp"

namespace stuckgate {

/// A scalar signal distribution: either an analytic uniform interval or an
/// empirical sample set. Used to account for the information a gate's
/// classical controller has to supply.
class Distribution {
 public:
  enum class Kind { uniform, empirical };

  /// Uniform on (lo, hi); requires hi > lo.
  static Distribution uniform(double lo, double hi);

  /// Empirical sample set; requires at least 2 finite samples.
  static Distribution empirical(std::vector<double> samples);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& samples() const { return samples_; }

 private:
  Distribution() = default;
  Kind kind_ = Kind::uniform;
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<double> samples_;
};

/// Absolute resolutions at a gate's input and output, in signal units.
struct PrecisionModel {
  PrecisionModel(double delta_in, double delta_out);
  double delta_in;
  double delta_out;
};

/// Entropy bookkeeping for one classically controlled gate, all in bits.
/// control_entropy_bits = h_out_bits - h_in_bits + precision_term_bits, and
/// is signed: negative means the output carries less information than the
/// input.
struct EntropyReport {
  double h_in_bits = 0.0;
  double h_out_bits = 0.0;
  double control_entropy_bits = 0.0;
  double precision_term_bits = 0.0;
  bool feasible = true;
};

/// Differential entropy in bits. Closed form log2(hi - lo) for the uniform
/// case; fixed-width histogram plug-in estimate (Freedman-Diaconis bin
/// width) for empirical samples. May be negative. Throws std::domain_error
/// for a degenerate sample (all values equal).
double differential_entropy(const Distribution& d);

/// Finite-resolution entropy: differential_entropy(d) - log2(delta).
/// The delta -> 0 limit diverges and is deliberately not evaluated.
double precision_entropy(const Distribution& d, double delta);

/// Information the gate control must supply:
///   h_out - h_in + log2(delta_in / delta_out).
/// Reduces to h_out - h_in at equal precision. Signed.
double control_entropy(double h_in_bits, double h_out_bits,
                       const PrecisionModel& prec);

/// Gate multiplying a uniform (0, a) input by constant k > 0: output is
/// uniform (0, ka) and the control must supply log2 k bits at equal
/// precision. feasible is false when |control entropy| exceeds budget_bits.
EntropyReport multiplier_gate_complexity(double k, double a,
                                         double budget_bits = 64.0,
                                         const PrecisionModel& prec = {1.0,
                                                                       1.0});

/// Fixed-angle rotation: input and output ranges coincide, so the control
/// entropy is zero at equal precision.
EntropyReport rotation_gate_complexity(double a = 1.0,
                                       double budget_bits = 64.0,
                                       const PrecisionModel& prec = {1.0,
                                                                     1.0});

/// -sum lambda_i log2 lambda_i over the eigenvalues, with 0 log 0 = 0.
/// Zero within 1e-9 iff the state is pure within 1e-9. Throws on inputs
/// whose eigenvalues fall below -1e-10.
double von_neumann_entropy(const DensityMatrix& rho);

/// tr(rho^2), in [1/2^n, 1]; equals 1 exactly for pure states.
double purity(const DensityMatrix& rho);

}  // namespace stuckgate
