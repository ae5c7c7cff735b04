#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "specwave/propagator.hpp"

namespace specwave {

// F(u) = mu |u|^(p-1) u applied pointwise on the quadrature grid.
struct SemilinearPower {
  double p = 2.0;   // > 1
  double mu = 0.0;  // coupling; 0 makes the problem linear
};

// F(u, u_t, L^(1/2) u), either pointwise on grid samples or directly as a
// functional of the coefficient vectors. F(0) = 0 is required and is
// spot-checked at the zero state before iterating.
struct GeneralFirstOrder {
  using Pointwise = std::function<std::complex<double>(
      std::complex<double> u, std::complex<double> ut, std::complex<double> half_power_u)>;
  using Functional =
      std::function<Coeffs(const Coeffs& u, const Coeffs& ut, const Coeffs& half_power_u)>;
  Pointwise pointwise;    // exactly one of the two must be set
  Functional functional;
};

// State tuple for order l: time derivatives d_t^j u for j <= l and powers
// L^(j/2) u for 1 <= j <= l, all as coefficient vectors per grid time.
struct StateTuple {
  int order = 1;
  std::vector<double> times;
  // time_derivatives[j][i]: j-th time derivative at times[i], j = 0..order
  std::vector<std::vector<Coeffs>> time_derivatives;
  // half_powers[j-1][i]: L^(j/2) u at times[i], j = 1..order
  std::vector<std::vector<Coeffs>> half_powers;
};

// F(U) as a functional of the order-l state tuple at one time index.
struct HigherOrderFunctional {
  int order = 1;  // l
  std::function<Coeffs(const StateTuple& tuple, int time_index)> evaluate;
};

struct Nonlinearity {
  std::variant<std::monostate, SemilinearPower, GeneralFirstOrder, HigherOrderFunctional> form;
  // Declared admissibility index of the nonlinearity; carried through to
  // reports, never verified against the evaluator.
  double declared_p = 2.0;

  bool is_linear() const;
  int order() const;  // l (1 unless a higher-order functional is attached)

  static Nonlinearity none();
  static Nonlinearity semilinear_power(double p, double mu);
  static Nonlinearity general(GeneralFirstOrder f, double declared_p);
  static Nonlinearity higher_order(HigherOrderFunctional f, double declared_p);
};

// Retarded forcing integral J and its time derivative on the grid `times`
// (strictly increasing, times[0] = 0): J(t) = integral_0^t r1(t - s) applied
// modewise to source(s) ds, by composite trapezoid on the given grid.
// source[i] are the coefficients of F at times[i].
Trajectory duhamel_integral(const Basis& basis, const DampingParams& params,
                            std::span<const Coeffs> source, std::span<const double> times);

// d_t^j u for j <= order via the mode ODE u'' = -(lambda + m) u - b u' + s,
// plus the half powers L^(j/2) u. A nonzero source enters the second
// derivative; orders >= 3 would need source time derivatives, which are not
// representable here, so that combination is rejected.
StateTuple build_state_vector(const Basis& basis, const DampingParams& params,
                              const Trajectory& trajectory, int order,
                              std::span<const Coeffs> source = {});

// sup over grid times of (1+t)^(-q) e^(gamma t) sum_{alpha + 2 beta <= weight}
// |d_t^alpha L^beta u|, beta in half-integer steps. The sup over a finite grid
// is a lower bound for the continuum value; grids should resolve the envelope.
double z_norm(const Basis& basis, const DampingParams& params, const Trajectory& trajectory,
              const DecayEnvelope& envelope, int weight, std::span<const Coeffs> source = {});

struct SmallnessReport {
  double epsilon = 0.0;    // |u0|_{H^sigma} + |u1|_{H^(sigma-1)}
  double sigma = 1.0;
  double threshold = 0.0;
  bool within = false;
};

// sigma >= 1; the verdict is advisory (reported, never used to reject a run).
SmallnessReport smallness_check(const Basis& basis, const Coeffs& u0_hat, const Coeffs& u1_hat,
                                double sigma, double threshold);

struct PicardOptions {
  double tolerance = 1e-10;        // sup-t increment below which iteration stops
  int max_iterations = 25;
  double smallness_threshold = 1e-2;
  double smallness_sigma = 1.0;
  bool keep_iterates = true;       // retain all intermediate trajectories
};

struct PicardRun {
  bool converged = false;
  int iterations = 0;  // completed fixed-point applications
  Trajectory trajectory;
  std::vector<Trajectory> iterates;        // includes the initial linear iterate
  std::vector<Coeffs> source;              // F along the final trajectory
  std::vector<double> increments;          // sup-t h_norm(u_k - u_(k-1))
  std::vector<double> contraction_ratios;  // increments[k] / increments[k-1]
  std::vector<double> iterate_z_norms;     // weight-1 Z norm per iterate
  SmallnessReport smallness;
  DecayEnvelope envelope;  // nonlinear-class envelope for these params
  double fitted_c = 0.0;   // sup_t state_norm(t) / envelope.bound(t)
};

// Fixed-point iteration u <- linear_part + J[F(u)] starting from the linear
// solution. Convergence requires the final increment below tolerance and the
// last contraction ratio below 1; three consecutive increment growths abort
// with DivergenceError. A linear problem (mu = 0 or no form) converges after
// one application, bit-identical to solve_linear.
PicardRun picard_solve(const Basis& basis, const DampingParams& params,
                       const Nonlinearity& nonlinearity, const Coeffs& u0_hat,
                       const Coeffs& u1_hat, std::span<const double> times,
                       const PicardOptions& options = {});

// |u| + |u_t| + |L^(1/2) u| at one snapshot: the quantity the decay envelopes
// bound, and the one fitted_c is measured against.
double state_norm(const Basis& basis, const LinearState& state);

// Coefficients of F at a single state. Defined for first-order forms only
// (power, general); order-2 functionals need the state tuple and are
// rejected here.
Coeffs nonlinear_source_at(const Basis& basis, const Nonlinearity& nonlinearity,
                           const Coeffs& u_hat, const Coeffs& ut_hat);

}  // namespace specwave
