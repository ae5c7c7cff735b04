#pragma once

#include <span>
#include <utility>

#include "specwave/nonlinear.hpp"

namespace specwave {

// Classical fixed-step RK4 references for cross-checking the closed-form and
// fixed-point paths. These share nothing with the kernels in ModeKernel: the
// right-hand side is integrated as a first-order system.

// One mode: u'' = -(lambda + m) u - b u', real data, integrated to t_end.
std::pair<double, double> rk4_mode(double lambda, const DampingParams& params, double u0,
                                   double u1, double t_end, double dt);

// Whole truncated system (method of lines in coefficient space), with the
// nonlinear source re-evaluated at every stage. Samples at `times`
// (strictly increasing from 0); the internal step subdivides each interval
// uniformly with steps of at most dt.
Trajectory rk4_system(const Basis& basis, const DampingParams& params,
                      const Nonlinearity& nonlinearity, const Coeffs& u0_hat,
                      const Coeffs& u1_hat, std::span<const double> times, double dt);

struct OracleComparison {
  bool conclusive = false;  // the reference refinement self-certified
  bool pass = false;        // discrepancy <= tolerance (only if conclusive)
  double discrepancy = 0.0; // sup-t h_norm difference / sup-t h_norm of subject
  double tolerance = 0.0;
  double dt_used = 0.0;
};

// Compares a subject trajectory against the RK4 reference, halving dt until
// two consecutive references agree to a tenth of the tolerance. Stops at a
// floor of dt = 1e-5 and reports inconclusive if the references still differ.
OracleComparison compare_with_oracle(const Basis& basis, const DampingParams& params,
                                     const Nonlinearity& nonlinearity, const Coeffs& u0_hat,
                                     const Coeffs& u1_hat, const Trajectory& subject,
                                     double tolerance, double initial_dt = 1e-2);

}  // namespace specwave
