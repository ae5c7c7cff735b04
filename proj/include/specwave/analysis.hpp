#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "specwave/transforms.hpp"

namespace specwave {

// Operator families with known Gagliardo-Nirenberg-type interpolation ranges.
enum class OperatorFamily { HarmonicOscillator, CompactManifoldLaplacian, TwistedLaplacian };

struct GNQuery {
  OperatorFamily family = OperatorFamily::HarmonicOscillator;
  int dimension = 1;  // n >= 1
  double p = 2.0;     // >= 1
};

struct GNResult {
  bool admissible = false;
  // Interpolation exponent when admissible: theta = n(p-1)/(2p) for the
  // oscillator and compact-manifold families, the first-order exponent
  // s = n(p-1)/p for the twisted family.
  std::optional<double> exponent;
};

// Exact rational arithmetic on the published ranges:
//   oscillator / compact manifold: every p for n <= 2, p <= n/(n-2) for n >= 3
//   twisted: every p for n = 1, p <= n/(n-1) for n >= 2
// Boundary values are admissible.
GNResult gn_admissible(const GNQuery& query);

struct EnvelopeFit {
  double gamma_hat = 0.0;  // clamped to >= 0
  double q_hat = 0.0;
  double c_hat = 0.0;
  double residual = 0.0;  // rms log-space residual over the fitted window
};

// Least squares for log v = log C + q log(1+t) - gamma t over the trailing
// tail_fraction of the samples. Requires at least 8 usable points with
// strictly positive values in the window. If the unconstrained gamma comes
// out negative it is clamped to 0 and (C, q) refitted.
EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> values,
                         double tail_fraction = 0.6);

struct ConvolutionProbeResult {
  double max_ratio = 0.0;  // max over trials of |a*b| / (|a| |b|)
  double sup_e_l1 = 0.0;   // max over modes of the quadrature L1 norm of e_xi
  int trials = 0;
  std::uint64_t seed = 0;
};

// Draws coefficient pairs with independent standard normal entries and
// records the worst ratio |a * b|_H / (|a|_H |b|_H) together with the
// empirical Young-type constant sup_xi |e_xi|_L1 of the truncated basis.
ConvolutionProbeResult convolution_bound_probe(const Basis& basis, int trials,
                                               std::uint64_t seed);

}  // namespace specwave
