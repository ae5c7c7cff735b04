#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "specwave/transforms.hpp"

namespace specwave {

// Damping coefficient b and mass m of  u_tt + L u + b u_t + m u = F.
// b must be strictly positive. m may be any real, but every solver checks the
// standing assumption lambda0 + m > 0 against the basis it is given.
struct DampingParams {
  double b = 1.0;
  double m = 0.0;
};

// Throws AssumptionViolation with a message naming the failed assumption.
void validate_damping(const DampingParams& params, double bottom_eigenvalue);

enum class ModeRegime { Oscillatory, Critical, Monotone };

// One spectral mode of the damped equation: u'' + (lambda + m) u + b u' = 0.
// r0/r1 are the fundamental solutions with (r0, r0') = (1, 0) and
// (r1, r1') = (0, 1) at t = 0, evaluated in closed form:
//
//   oscillatory  (lambda + m > b^2/4), w = sqrt(lambda + m - b^2/4):
//       r0 = e^{-bt/2} (cos wt + (b/2w) sin wt),   r1 = e^{-bt/2} sin(wt)/w
//   critical     (lambda + m = b^2/4):
//       r0 = (1 + (b/2) t) e^{-bt/2},              r1 = t e^{-bt/2}
//   monotone     (lambda + m < b^2/4), v = sqrt(b^2/4 - lambda - m):
//       hyperbolic forms, evaluated so the slow root e^{(v - b/2) t} is
//       never computed as a difference of large exponentials.
//
// The critical branch is taken when |lambda + m - b^2/4| <= 1e-9 max(1, b^2/4);
// both generic forms converge to it through that window.
class ModeKernel {
 public:
  ModeKernel(double lambda, const DampingParams& params);

  ModeRegime regime() const { return regime_; }
  double lambda() const { return lambda_; }

  double r0(double t) const;  // position response to u(0) = 1
  double r1(double t) const;  // position response to u'(0) = 1

  // Exact derivatives via r0' = -(lambda + m) r1 and r1' = r0 - b r1.
  double r0_dot(double t) const;
  double r1_dot(double t) const;

 private:
  double lambda_ = 0.0;
  double b_ = 0.0;
  double shifted_ = 0.0;  // lambda + m
  double rate_ = 0.0;     // w (oscillatory) or v (monotone)
  ModeRegime regime_ = ModeRegime::Critical;
};

// Closed-form (u(t), u'(t)) for one mode with data (u0, u1). t >= 0.
std::pair<std::complex<double>, std::complex<double>> mode_solution(
    double lambda, const DampingParams& params, std::complex<double> u0,
    std::complex<double> u1, double t);
std::pair<double, double> mode_solution(double lambda, const DampingParams& params,
                                        double u0, double u1, double t);

// Solution snapshot: coefficients of u and du/dt at one time.
struct LinearState {
  double t = 0.0;
  Coeffs u_hat;
  Coeffs ut_hat;
};

using Trajectory = std::vector<LinearState>;

// Homogeneous solve, every mode independently in closed form, sampled at the
// given times (each must be >= 0; the list need not be sorted here, but the
// integral and fixed-point solvers require strictly increasing grids).
Trajectory solve_linear(const Basis& basis, const DampingParams& params,
                        const Coeffs& u0_hat, const Coeffs& u1_hat,
                        std::span<const double> times);

// Decay envelope (1 + t)^q e^{-gamma t} for the chosen problem class.
struct DecayEnvelope {
  double gamma = 0.0;
  double q = 0.0;
  double bound(double t) const;
};

// Envelope exponents determined by where b sits relative to 2 sqrt(lambda0+m):
// below (oscillatory bulk), at (critical), above (overdamped slow root).
// Linear problems take q in {0, 1, 0}; small-data fixed-point solutions pay a
// polynomial factor, q in {1/2, 3/2, 1/2}. The derivative counts alpha, beta
// only gate validity (alpha >= 0, 2 beta integral >= 0); the exponents are
// uniform in them.
DecayEnvelope classify_decay(const DampingParams& params, double bottom_eigenvalue,
                             int alpha, double beta, bool nonlinear);

// E(t) = (|u_t|^2 + |L^(1/2) u|^2 + m |u|^2) / 2 in the coefficient metric.
// Nonnegative when m >= 0; reported signed otherwise.
double energy(const Basis& basis, const DampingParams& params, const LinearState& state);

}  // namespace specwave
