#include "specwave/propagator.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "specwave/errors.hpp"
#include "specwave/threading.hpp"

namespace specwave {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_times(std::span<const double> times) {
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0)
      throw Error(ErrorCode::InvalidArgument, "sample times must be finite and >= 0, got " + num(t));
  }
}

// Window around the double root inside which the critical closed form is
// used; both generic branches approach it smoothly through this window.
double critical_window(double b) { return 1e-9 * std::max(1.0, 0.25 * b * b); }

}  // namespace

void validate_damping(const DampingParams& params, double bottom_eigenvalue) {
  if (!std::isfinite(params.b) || params.b <= 0.0)
    throw Error(ErrorCode::AssumptionViolation,
                "standing assumption b > 0 fails: b = " + num(params.b));
  if (!std::isfinite(params.m))
    throw Error(ErrorCode::InvalidArgument, "mass term must be finite");
  if (bottom_eigenvalue + params.m <= 0.0)
    throw Error(ErrorCode::AssumptionViolation,
                "standing assumption lambda0 + m > 0 fails: bottom eigenvalue " +
                    num(bottom_eigenvalue) + " and mass " + num(params.m) + " give " +
                    num(bottom_eigenvalue + params.m));
}

ModeKernel::ModeKernel(double lambda, const DampingParams& params)
    : lambda_(lambda), b_(params.b), shifted_(lambda + params.m) {
  if (!std::isfinite(b_) || b_ <= 0.0)
    throw Error(ErrorCode::AssumptionViolation,
                "standing assumption b > 0 fails: b = " + num(b_));
  if (!std::isfinite(shifted_) || shifted_ <= 0.0)
    throw Error(ErrorCode::AssumptionViolation,
                "standing assumption lambda + m > 0 fails: lambda = " + num(lambda) +
                    ", m = " + num(params.m));
  const double quarter_b2 = 0.25 * b_ * b_;
  const double gap = shifted_ - quarter_b2;
  if (std::abs(gap) <= critical_window(b_)) {
    regime_ = ModeRegime::Critical;
    rate_ = 0.0;
  } else if (gap > 0.0) {
    regime_ = ModeRegime::Oscillatory;
    rate_ = std::sqrt(gap);
  } else {
    regime_ = ModeRegime::Monotone;
    rate_ = std::sqrt(-gap);
  }
}

double ModeKernel::r0(double t) const {
  const double half_b = 0.5 * b_;
  switch (regime_) {
    case ModeRegime::Oscillatory:
      return std::exp(-half_b * t) *
             (std::cos(rate_ * t) + half_b / rate_ * std::sin(rate_ * t));
    case ModeRegime::Critical:
      return (1.0 + half_b * t) * std::exp(-half_b * t);
    case ModeRegime::Monotone: {
      // Both roots -b/2 -+ v factored through the slow one so no large
      // exponentials are ever formed: e^{(v-b/2)t} stays <= 1.
      const double slow = std::exp((rate_ - half_b) * t);
      const double shrink = std::exp(-2.0 * rate_ * t);
      return slow * (0.5 * (1.0 + shrink) - half_b / (2.0 * rate_) * std::expm1(-2.0 * rate_ * t));
    }
  }
  return 0.0;
}

double ModeKernel::r1(double t) const {
  const double half_b = 0.5 * b_;
  switch (regime_) {
    case ModeRegime::Oscillatory:
      return std::exp(-half_b * t) * std::sin(rate_ * t) / rate_;
    case ModeRegime::Critical:
      return t * std::exp(-half_b * t);
    case ModeRegime::Monotone:
      return std::exp((rate_ - half_b) * t) * (-std::expm1(-2.0 * rate_ * t)) / (2.0 * rate_);
  }
  return 0.0;
}

double ModeKernel::r0_dot(double t) const { return -shifted_ * r1(t); }

double ModeKernel::r1_dot(double t) const { return r0(t) - b_ * r1(t); }

std::pair<std::complex<double>, std::complex<double>> mode_solution(
    double lambda, const DampingParams& params, std::complex<double> u0,
    std::complex<double> u1, double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw Error(ErrorCode::InvalidArgument, "mode_solution requires t >= 0, got " + num(t));
  const ModeKernel kernel(lambda, params);
  const double r0 = kernel.r0(t);
  const double r1 = kernel.r1(t);
  // u' follows from r0' = -(lambda+m) r1 and r1' = r0 - b r1, so real data
  // never touches complex arithmetic.
  const std::complex<double> u = r0 * u0 + r1 * u1;
  const std::complex<double> ut = -(lambda + params.m) * r1 * u0 + (r0 - params.b * r1) * u1;
  return {u, ut};
}

std::pair<double, double> mode_solution(double lambda, const DampingParams& params, double u0,
                                        double u1, double t) {
  auto [u, ut] = mode_solution(lambda, params, std::complex<double>(u0), std::complex<double>(u1), t);
  return {u.real(), ut.real()};
}

Trajectory solve_linear(const Basis& basis, const DampingParams& params, const Coeffs& u0_hat,
                        const Coeffs& u1_hat, std::span<const double> times) {
  validate_damping(params, basis.bottom());
  if (u0_hat.size() != basis.mode_count() || u1_hat.size() != basis.mode_count())
    throw Error(ErrorCode::DimensionMismatch, "initial data must have one coefficient per mode");
  check_times(times);

  const int n = basis.mode_count();
  std::vector<ModeKernel> kernels;
  kernels.reserve(n);
  for (int i = 0; i < n; ++i) kernels.emplace_back(basis.eigenvalue(i), params);

  Trajectory out(times.size());
  parallel_for(times.size(), [&](std::size_t s) {
    const double t = times[s];
    LinearState& state = out[s];
    state.t = t;
    state.u_hat.resize(n);
    state.ut_hat.resize(n);
    for (int i = 0; i < n; ++i) {
      const double r0 = kernels[i].r0(t);
      const double r1 = kernels[i].r1(t);
      const double shifted = basis.eigenvalue(i) + params.m;
      state.u_hat(i) = r0 * u0_hat(i) + r1 * u1_hat(i);
      state.ut_hat(i) = -shifted * r1 * u0_hat(i) + (r0 - params.b * r1) * u1_hat(i);
    }
  });
  return out;
}

double DecayEnvelope::bound(double t) const {
  return std::pow(1.0 + t, q) * std::exp(-gamma * t);
}

DecayEnvelope classify_decay(const DampingParams& params, double bottom_eigenvalue, int alpha,
                             double beta, bool nonlinear) {
  validate_damping(params, bottom_eigenvalue);
  if (alpha < 0) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  if (!(beta >= 0.0) || std::abs(2.0 * beta - std::round(2.0 * beta)) > 1e-12)
    throw Error(ErrorCode::InvalidArgument,
                "beta must be a nonnegative half-integer, got " + num(beta));
  // The exponents depend only on where b sits relative to 2 sqrt(lambda0+m);
  // alpha and beta change constants, not rates.
  const double shifted = bottom_eigenvalue + params.m;
  const double quarter_b2 = 0.25 * params.b * params.b;
  const double gap = shifted - quarter_b2;
  DecayEnvelope env;
  if (std::abs(gap) <= critical_window(params.b)) {
    env.gamma = 0.5 * params.b;
    env.q = nonlinear ? 1.5 : 1.0;
  } else if (gap > 0.0) {
    env.gamma = 0.5 * params.b;
    env.q = nonlinear ? 0.5 : 0.0;
  } else {
    env.gamma = 0.5 * params.b - std::sqrt(-gap);
    env.q = nonlinear ? 0.5 : 0.0;
  }
  return env;
}

double energy(const Basis& basis, const DampingParams& params, const LinearState& state) {
  if (state.u_hat.size() != basis.mode_count() || state.ut_hat.size() != basis.mode_count())
    throw Error(ErrorCode::DimensionMismatch, "state size does not match basis");
  double kinetic = 0.0, potential = 0.0, mass = 0.0;
  for (int i = 0; i < basis.mode_count(); ++i) {
    kinetic += std::norm(state.ut_hat(i));
    potential += basis.eigenvalue(i) * std::norm(state.u_hat(i));
    mass += std::norm(state.u_hat(i));
  }
  return 0.5 * (kinetic + potential + params.m * mass);
}

}  // namespace specwave
