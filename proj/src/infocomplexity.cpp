#include "stuckgate/infocomplexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stuckgate {

namespace {

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * (static_cast<double>(s.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] * (1.0 - frac) + s[hi] * frac;
}

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= lo)
    throw std::invalid_argument("uniform distribution requires hi > lo");
  Distribution d;
  d.kind_ = Kind::uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

Distribution Distribution::empirical(std::vector<double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("empirical distribution needs >= 2 samples");
  for (double x : samples)
    if (!std::isfinite(x))
      throw std::invalid_argument("empirical distribution: non-finite sample");
  Distribution d;
  d.kind_ = Kind::empirical;
  d.samples_ = std::move(samples);
  return d;
}

PrecisionModel::PrecisionModel(double din, double dout)
    : delta_in(din), delta_out(dout) {
  if (!(din > 0.0) || !(dout > 0.0) || !std::isfinite(din) ||
      !std::isfinite(dout))
    throw std::invalid_argument("PrecisionModel: deltas must be positive");
}

double differential_entropy(const Distribution& d) {
  if (d.kind() == Distribution::Kind::uniform)
    return std::log2(d.hi() - d.lo());

  std::vector<double> s = d.samples();
  std::sort(s.begin(), s.end());
  const double range = s.back() - s.front();
  if (range == 0.0)
    throw std::domain_error(
        "differential_entropy: degenerate sample (all values equal)");

  // Freedman-Diaconis width; fall back to a sqrt-count grid when the IQR
  // collapses.
  const double n = static_cast<double>(s.size());
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  double width = 2.0 * iqr / std::cbrt(n);
  if (width <= 0.0) width = range / std::ceil(std::sqrt(n));

  const std::size_t bins =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / width)));
  std::vector<std::size_t> counts(bins, 0);
  for (double x : s) {
    std::size_t b = static_cast<std::size_t>((x - s.front()) / width);
    if (b >= bins) b = bins - 1;  // top edge
    ++counts[b];
  }

  // Plug-in estimate: sum p_i log2(width / p_i).
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h += p * std::log2(width / p);
  }
  return h;
}

double precision_entropy(const Distribution& d, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("precision_entropy: delta must be positive");
  return differential_entropy(d) - std::log2(delta);
}

double control_entropy(double h_in_bits, double h_out_bits,
                       const PrecisionModel& prec) {
  if (!std::isfinite(h_in_bits) || !std::isfinite(h_out_bits))
    throw std::invalid_argument("control_entropy: non-finite entropy");
  return h_out_bits - h_in_bits + std::log2(prec.delta_in / prec.delta_out);
}

EntropyReport multiplier_gate_complexity(double k, double a,
                                         double budget_bits,
                                         const PrecisionModel& prec) {
  if (!(k > 0.0) || !(a > 0.0))
    throw std::invalid_argument(
        "multiplier_gate_complexity: k and a must be positive");
  EntropyReport r;
  r.h_in_bits = std::log2(a);
  r.h_out_bits = std::log2(k * a);
  r.precision_term_bits = std::log2(prec.delta_in / prec.delta_out);
  r.control_entropy_bits = control_entropy(r.h_in_bits, r.h_out_bits, prec);
  r.feasible = std::abs(r.control_entropy_bits) <= budget_bits;
  return r;
}

EntropyReport rotation_gate_complexity(double a, double budget_bits,
                                       const PrecisionModel& prec) {
  if (!(a > 0.0))
    throw std::invalid_argument("rotation_gate_complexity: a must be positive");
  EntropyReport r;
  r.h_in_bits = std::log2(a);
  r.h_out_bits = r.h_in_bits;
  r.precision_term_bits = std::log2(prec.delta_in / prec.delta_out);
  r.control_entropy_bits = control_entropy(r.h_in_bits, r.h_out_bits, prec);
  r.feasible = std::abs(r.control_entropy_bits) <= budget_bits;
  return r;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double h = 0.0;
  for (double lambda : hermitian_eigenvalues(rho)) {
    if (lambda < -1e-10)
      throw std::invalid_argument("von_neumann_entropy: negative eigenvalue");
    if (lambda <= 0.0) continue;
    h -= lambda * std::log2(lambda);
  }
  return h;
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double acc = 0.0;
  for (const Complex& e : rho.entries()) acc += std::norm(e);
  return acc;
}

}  // namespace stuckgate
