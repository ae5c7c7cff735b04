#include "specwave/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

void check_grid(std::span<const double> times) {
  if (times.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "time grid needs at least two samples");
  if (times[0] != 0.0)
    throw Error(ErrorCode::InvalidArgument, "time grid must start at 0, got " + num(times[0]));
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::InvalidArgument,
                  "time grid must be strictly increasing, violated at index " + std::to_string(i));
  }
  if (!std::isfinite(times.back()))
    throw Error(ErrorCode::InvalidArgument, "time grid must be finite");
}

void check_source(const Basis& basis, std::span<const Coeffs> source, std::size_t steps) {
  if (source.size() != steps)
    throw Error(ErrorCode::DimensionMismatch,
                "source needs one coefficient vector per grid time: expected " +
                    std::to_string(steps) + ", got " + std::to_string(source.size()));
  for (const Coeffs& s : source)
    if (s.size() != basis.mode_count())
      throw Error(ErrorCode::DimensionMismatch, "source vector length does not match basis");
}

// Composite trapezoid weights for integrating over times[0..upto] inclusive.
// Degenerate single-point prefixes integrate to zero.
double trapezoid_weight(std::span<const double> times, std::size_t upto, std::size_t j) {
  if (upto == 0) return 0.0;
  if (j == 0) return 0.5 * (times[1] - times[0]);
  if (j == upto) return 0.5 * (times[upto] - times[upto - 1]);
  return 0.5 * (times[j + 1] - times[j - 1]);
}

}  // namespace

bool Nonlinearity::is_linear() const {
  if (std::holds_alternative<std::monostate>(form)) return true;
  if (const auto* power = std::get_if<SemilinearPower>(&form)) return power->mu == 0.0;
  return false;
}

int Nonlinearity::order() const {
  if (const auto* higher = std::get_if<HigherOrderFunctional>(&form)) return higher->order;
  return 1;
}

Nonlinearity Nonlinearity::none() { return Nonlinearity{std::monostate{}, 2.0}; }

Nonlinearity Nonlinearity::semilinear_power(double p, double mu) {
  if (!std::isfinite(p) || p < 1.0)
    throw Error(ErrorCode::InvalidArgument, "power nonlinearity needs p >= 1, got " + num(p));
  if (!std::isfinite(mu))
    throw Error(ErrorCode::InvalidArgument, "coupling mu must be finite");
  return Nonlinearity{SemilinearPower{p, mu}, p};
}

Nonlinearity Nonlinearity::general(GeneralFirstOrder f, double declared_p) {
  const bool has_pointwise = static_cast<bool>(f.pointwise);
  const bool has_functional = static_cast<bool>(f.functional);
  if (has_pointwise == has_functional)
    throw Error(ErrorCode::InvalidArgument,
                "general nonlinearity needs exactly one of pointwise / functional evaluators");
  return Nonlinearity{std::move(f), declared_p};
}

Nonlinearity Nonlinearity::higher_order(HigherOrderFunctional f, double declared_p) {
  if (f.order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  if (!f.evaluate)
    throw Error(ErrorCode::InvalidArgument, "higher-order nonlinearity needs an evaluator");
  return Nonlinearity{std::move(f), declared_p};
}

Trajectory duhamel_integral(const Basis& basis, const DampingParams& params,
                            std::span<const Coeffs> source, std::span<const double> times) {
  validate_damping(params, basis.bottom());
  check_grid(times);
  check_source(basis, source, times.size());

  const int n = basis.mode_count();
  std::vector<ModeKernel> kernels;
  kernels.reserve(n);
  for (int i = 0; i < n; ++i) kernels.emplace_back(basis.eigenvalue(i), params);

  Trajectory out(times.size());
  parallel_for(times.size(), [&](std::size_t s) {
    LinearState& state = out[s];
    state.t = times[s];
    state.u_hat = Coeffs::Zero(n);
    state.ut_hat = Coeffs::Zero(n);
    for (std::size_t j = 0; j <= s; ++j) {
      const double w = trapezoid_weight(times, s, j);
      if (w == 0.0) continue;
      const double lag = times[s] - times[j];
      for (int i = 0; i < n; ++i) {
        // The boundary term of d/dt vanishes because r1(0) = 0, so the
        // derivative is the same quadrature applied to r1'.
        state.u_hat(i) += w * kernels[i].r1(lag) * source[j](i);
        state.ut_hat(i) += w * kernels[i].r1_dot(lag) * source[j](i);
      }
    }
  });
  return out;
}

StateTuple build_state_vector(const Basis& basis, const DampingParams& params,
                              const Trajectory& trajectory, int order,
                              std::span<const Coeffs> source) {
  validate_damping(params, basis.bottom());
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  if (trajectory.empty()) throw Error(ErrorCode::InvalidArgument, "trajectory is empty");
  const int n = basis.mode_count();
  for (const LinearState& state : trajectory)
    if (state.u_hat.size() != n || state.ut_hat.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "trajectory state size does not match basis");
  const bool has_source = !source.empty();
  if (has_source) check_source(basis, source, trajectory.size());
  if (order >= 3 && has_source)
    throw Error(ErrorCode::Unsupported,
                "time derivatives of order >= 3 need time derivatives of the source, which are "
                "not representable; supported orders with a source are 1 and 2");

  StateTuple tuple;
  tuple.order = order;
  tuple.times.reserve(trajectory.size());
  for (const LinearState& state : trajectory) tuple.times.push_back(state.t);

  tuple.time_derivatives.assign(order + 1, {});
  for (auto& level : tuple.time_derivatives) level.resize(trajectory.size());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    tuple.time_derivatives[0][i] = trajectory[i].u_hat;
    tuple.time_derivatives[1][i] = trajectory[i].ut_hat;
  }
  // d_t^(j+2) u = -(lambda+m) d_t^j u - b d_t^(j+1) u (+ source at j = 0).
  for (int j = 2; j <= order; ++j) {
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      Coeffs next(n);
      const Coeffs& two_back = tuple.time_derivatives[j - 2][i];
      const Coeffs& one_back = tuple.time_derivatives[j - 1][i];
      for (int k = 0; k < n; ++k) {
        next(k) = -(basis.eigenvalue(k) + params.m) * two_back(k) - params.b * one_back(k);
        if (j == 2 && has_source) next(k) += source[i](k);
      }
      tuple.time_derivatives[j][i] = std::move(next);
    }
  }

  tuple.half_powers.assign(order, {});
  for (int j = 1; j <= order; ++j) {
    tuple.half_powers[j - 1].resize(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i)
      tuple.half_powers[j - 1][i] = apply_l_power(basis, trajectory[i].u_hat, 0.5 * j);
  }
  return tuple;
}

double z_norm(const Basis& basis, const DampingParams& params, const Trajectory& trajectory,
              const DecayEnvelope& envelope, int weight, std::span<const Coeffs> source) {
  if (weight < 1) throw Error(ErrorCode::InvalidArgument, "weight must be >= 1");
  const StateTuple tuple = build_state_vector(basis, params, trajectory, weight, source);
  double sup = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    double sum = 0.0;
    // All pairs (alpha, beta = j/2) with alpha + 2 beta <= weight.
    for (int alpha = 0; alpha <= weight; ++alpha) {
      for (int j = 0; alpha + j <= weight; ++j) {
        const Coeffs& base = tuple.time_derivatives[alpha][i];
        sum += (j == 0) ? h_norm(basis, base)
                        : h_norm(basis, apply_l_power(basis, base, 0.5 * j));
      }
    }
    sup = std::max(sup, sum / envelope.bound(trajectory[i].t));
  }
  return sup;
}

SmallnessReport smallness_check(const Basis& basis, const Coeffs& u0_hat, const Coeffs& u1_hat,
                                double sigma, double threshold) {
  if (!(sigma >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "sigma must be >= 1, got " + num(sigma));
  if (!(threshold > 0.0))
    throw Error(ErrorCode::InvalidArgument, "threshold must be positive, got " + num(threshold));
  SmallnessReport report;
  report.sigma = sigma;
  report.threshold = threshold;
  report.epsilon = sobolev_norm(basis, u0_hat, sigma) + sobolev_norm(basis, u1_hat, sigma - 1.0);
  report.within = report.epsilon <= threshold;
  return report;
}

double state_norm(const Basis& basis, const LinearState& state) {
  return h_norm(basis, state.u_hat) + h_norm(basis, state.ut_hat) +
         h_norm(basis, apply_l_power(basis, state.u_hat, 0.5));
}

Coeffs nonlinear_source_at(const Basis& basis, const Nonlinearity& nonlinearity,
                           const Coeffs& u_hat, const Coeffs& ut_hat) {
  const int n = basis.mode_count();
  if (u_hat.size() != n || ut_hat.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "state size does not match basis");
  if (nonlinearity.is_linear()) return Coeffs::Zero(n);

  if (const auto* power = std::get_if<SemilinearPower>(&nonlinearity.form)) {
    GridFn values = inverse_transform(basis, u_hat);
    for (Eigen::Index q = 0; q < values.size(); ++q) {
      const double mag = std::abs(values(q));
      values(q) = mag > 0.0 ? power->mu * std::pow(mag, power->p - 1.0) * values(q)
                            : std::complex<double>(0.0);
    }
    return forward_transform(basis, values);
  }

  if (const auto* general = std::get_if<GeneralFirstOrder>(&nonlinearity.form)) {
    const Coeffs half_power = apply_l_power(basis, u_hat, 0.5);
    if (general->pointwise) {
      const GridFn u = inverse_transform(basis, u_hat);
      const GridFn ut = inverse_transform(basis, ut_hat);
      const GridFn hu = inverse_transform(basis, half_power);
      GridFn values(u.size());
      for (Eigen::Index q = 0; q < u.size(); ++q) values(q) = general->pointwise(u(q), ut(q), hu(q));
      return forward_transform(basis, values);
    }
    Coeffs result = general->functional(u_hat, ut_hat, half_power);
    if (result.size() != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "nonlinearity functional returned a vector of wrong length");
    return result;
  }

  throw Error(ErrorCode::Unsupported,
              "order-2 functionals need the full state tuple; single-state evaluation is "
              "defined for first-order forms only");
}

namespace {

// Coefficients of F along one iterate. `previous_source` is the forcing the
// iterate itself solves with; an order-2 functional differentiates through it.
std::vector<Coeffs> evaluate_source(const Basis& basis, const DampingParams& params,
                                    const Nonlinearity& nonlinearity, const Trajectory& iterate,
                                    std::span<const Coeffs> previous_source) {
  const int n = basis.mode_count();
  const std::size_t steps = iterate.size();
  std::vector<Coeffs> out(steps, Coeffs::Zero(n));

  if (nonlinearity.is_linear()) return out;

  if (!std::holds_alternative<HigherOrderFunctional>(nonlinearity.form)) {
    parallel_for(steps, [&](std::size_t i) {
      out[i] = nonlinear_source_at(basis, nonlinearity, iterate[i].u_hat, iterate[i].ut_hat);
    });
    return out;
  }

  const auto& higher = std::get<HigherOrderFunctional>(nonlinearity.form);
  const StateTuple tuple =
      build_state_vector(basis, params, iterate, higher.order, previous_source);
  for (std::size_t i = 0; i < steps; ++i) {
    Coeffs result = higher.evaluate(tuple, static_cast<int>(i));
    if (result.size() != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "nonlinearity functional returned a vector of wrong length");
    out[i] = std::move(result);
  }
  return out;
}

double max_source_magnitude(const std::vector<Coeffs>& source) {
  double mag = 0.0;
  for (const Coeffs& s : source)
    if (s.size() > 0) mag = std::max(mag, s.cwiseAbs().maxCoeff());
  return mag;
}

// F(0) = 0 is required for the zero state to be a fixed point; user-supplied
// evaluators are spot-checked there (power nonlinearities satisfy it by
// construction).
void check_vanishes_at_zero(const Basis& basis, const DampingParams& params,
                            const Nonlinearity& nonlinearity, std::span<const double> times) {
  if (nonlinearity.is_linear() || std::holds_alternative<SemilinearPower>(nonlinearity.form))
    return;
  const int n = basis.mode_count();
  Trajectory zero(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    zero[i].t = times[i];
    zero[i].u_hat = Coeffs::Zero(n);
    zero[i].ut_hat = Coeffs::Zero(n);
  }
  std::vector<Coeffs> previous(times.size(), Coeffs::Zero(n));
  const auto at_zero = evaluate_source(basis, params, nonlinearity, zero, previous);
  const double mag = max_source_magnitude(at_zero);
  if (mag > 1e-12)
    throw Error(ErrorCode::Validation,
                "nonlinearity does not vanish at the zero state: |F(0)| reaches " + num(mag));
}

}  // namespace

PicardRun picard_solve(const Basis& basis, const DampingParams& params,
                       const Nonlinearity& nonlinearity, const Coeffs& u0_hat,
                       const Coeffs& u1_hat, std::span<const double> times,
                       const PicardOptions& options) {
  validate_damping(params, basis.bottom());
  check_grid(times);
  if (!(options.tolerance > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (options.max_iterations < 1)
    throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (nonlinearity.order() >= 3 && !nonlinearity.is_linear())
    throw Error(ErrorCode::Unsupported,
                "fixed-point solves support nonlinearity orders 1 and 2 only");
  check_vanishes_at_zero(basis, params, nonlinearity, times);

  PicardRun run;
  run.smallness =
      smallness_check(basis, u0_hat, u1_hat, options.smallness_sigma, options.smallness_threshold);
  run.envelope = classify_decay(params, basis.bottom(), 0, 0.0, !nonlinearity.is_linear());

  const int n = basis.mode_count();
  const Trajectory linear_part = solve_linear(basis, params, u0_hat, u1_hat, times);
  Trajectory current = linear_part;
  std::vector<Coeffs> current_source(times.size(), Coeffs::Zero(n));

  if (options.keep_iterates) run.iterates.push_back(current);
  run.iterate_z_norms.push_back(z_norm(basis, params, current, run.envelope, 1));

  int growth_streak = 0;
  for (int k = 1; k <= options.max_iterations; ++k) {
    std::vector<Coeffs> source =
        evaluate_source(basis, params, nonlinearity, current, current_source);

    Trajectory next;
    if (max_source_magnitude(source) == 0.0) {
      next = linear_part;  // keeps the linear problem bit-identical to solve_linear
    } else {
      next = duhamel_integral(basis, params, source, times);
      for (std::size_t i = 0; i < next.size(); ++i) {
        next[i].u_hat += linear_part[i].u_hat;
        next[i].ut_hat += linear_part[i].ut_hat;
      }
    }

    double increment = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      increment = std::max(increment, (next[i].u_hat - current[i].u_hat).norm());
    run.increments.push_back(increment);
    if (run.increments.size() >= 2) {
      const double prev = run.increments[run.increments.size() - 2];
      run.contraction_ratios.push_back(
          prev > 0.0 ? increment / prev
                     : (increment > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
      growth_streak = increment > prev ? growth_streak + 1 : 0;
      if (growth_streak >= 3)
        throw DivergenceError(
            "fixed-point iteration diverges: increments grew for 3 consecutive iterations "
            "(last increment " + num(increment) + ")",
            run.contraction_ratios);
    }

    current = std::move(next);
    current_source = std::move(source);
    run.iterations = k;
    if (options.keep_iterates) run.iterates.push_back(current);
    run.iterate_z_norms.push_back(z_norm(basis, params, current, run.envelope, 1));

    const bool ratio_ok =
        run.contraction_ratios.empty() || run.contraction_ratios.back() < 1.0;
    if (increment < options.tolerance && ratio_ok) {
      run.converged = true;
      break;
    }
  }

  run.trajectory = std::move(current);
  run.source = std::move(current_source);
  run.fitted_c = 0.0;
  for (const LinearState& state : run.trajectory)
    run.fitted_c =
        std::max(run.fitted_c, state_norm(basis, state) / run.envelope.bound(state.t));
  return run;
}

}  // namespace specwave
