#include "specwave/oracle.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "specwave/errors.hpp"

namespace specwave {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::pair<double, double> rk4_mode(double lambda, const DampingParams& params, double u0,
                                   double u1, double t_end, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (!std::isfinite(t_end) || t_end < 0.0)
    throw Error(ErrorCode::InvalidArgument, "t_end must be finite and >= 0");
  const double shifted = lambda + params.m;
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
  double u = u0, v = u1;
  auto acc = [&](double uu, double vv) { return -shifted * uu - params.b * vv; };
  for (long s = 0; s < steps; ++s) {
    const double k1u = v, k1v = acc(u, v);
    const double k2u = v + 0.5 * h * k1v, k2v = acc(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const double k3u = v + 0.5 * h * k2v, k3v = acc(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const double k4u = v + h * k3v, k4v = acc(u + h * k3u, v + h * k3v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return {u, v};
}

Trajectory rk4_system(const Basis& basis, const DampingParams& params,
                      const Nonlinearity& nonlinearity, const Coeffs& u0_hat,
                      const Coeffs& u1_hat, std::span<const double> times, double dt) {
  validate_damping(params, basis.bottom());
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (times.empty() || times[0] != 0.0)
    throw Error(ErrorCode::InvalidArgument, "sample grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "sample grid must be strictly increasing");
  const int n = basis.mode_count();
  if (u0_hat.size() != n || u1_hat.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "initial data must have one coefficient per mode");
  if (!nonlinearity.is_linear() && nonlinearity.order() >= 2)
    throw Error(ErrorCode::Unsupported,
                "the reference integrator supports first-order nonlinearities only");

  Eigen::VectorXd shifted(n);
  for (int i = 0; i < n; ++i) shifted(i) = basis.eigenvalue(i) + params.m;

  // acc = -(lambda+m) u - b v + F(u, v), re-evaluated at every stage.
  auto acc = [&](const Coeffs& u, const Coeffs& v) -> Coeffs {
    Coeffs a = -(shifted.array() * u.array()).matrix() - params.b * v;
    if (!nonlinearity.is_linear()) a += nonlinear_source_at(basis, nonlinearity, u, v);
    return a;
  };

  Trajectory out(times.size());
  Coeffs u = u0_hat, v = u1_hat;
  out[0] = {times[0], u, v};
  for (std::size_t seg = 1; seg < times.size(); ++seg) {
    const double span = times[seg] - times[seg - 1];
    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-12)));
    const double h = span / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const Coeffs k1u = v, k1v = acc(u, v);
      const Coeffs u2 = u + 0.5 * h * k1u, v2 = v + 0.5 * h * k1v;
      const Coeffs k2u = v2, k2v = acc(u2, v2);
      const Coeffs u3 = u + 0.5 * h * k2u, v3 = v + 0.5 * h * k2v;
      const Coeffs k3u = v3, k3v = acc(u3, v3);
      const Coeffs u4 = u + h * k3u, v4 = v + h * k3v;
      const Coeffs k4u = v4, k4v = acc(u4, v4);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    out[seg] = {times[seg], u, v};
  }
  return out;
}

OracleComparison compare_with_oracle(const Basis& basis, const DampingParams& params,
                                     const Nonlinearity& nonlinearity, const Coeffs& u0_hat,
                                     const Coeffs& u1_hat, const Trajectory& subject,
                                     double tolerance, double initial_dt) {
  if (subject.empty()) throw Error(ErrorCode::InvalidArgument, "subject trajectory is empty");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  std::vector<double> times;
  times.reserve(subject.size());
  for (const LinearState& state : subject) times.push_back(state.t);

  constexpr double kFloor = 1e-5;
  OracleComparison cmp;
  cmp.tolerance = tolerance;

  auto sup_diff = [&](const Trajectory& a, const Trajectory& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      sup = std::max(sup, (a[i].u_hat - b[i].u_hat).norm());
    return sup;
  };

  double dt = initial_dt;
  Trajectory coarse = rk4_system(basis, params, nonlinearity, u0_hat, u1_hat, times, dt);
  while (true) {
    Trajectory fine = rk4_system(basis, params, nonlinearity, u0_hat, u1_hat, times, 0.5 * dt);
    double scale = 0.0;
    for (const LinearState& state : subject) scale = std::max(scale, state.u_hat.norm());
    if (scale == 0.0) scale = 1.0;
    const double self_error = sup_diff(coarse, fine) / scale;
    if (self_error <= 0.1 * tolerance) {
      cmp.conclusive = true;
      cmp.dt_used = 0.5 * dt;
      cmp.discrepancy = sup_diff(subject, fine) / scale;
      cmp.pass = cmp.discrepancy <= tolerance;
      return cmp;
    }
    dt *= 0.5;
    if (0.5 * dt < kFloor) {
      // Could not certify the reference at the step-size floor.
      cmp.conclusive = false;
      cmp.dt_used = 0.5 * dt;
      cmp.discrepancy = sup_diff(subject, fine) / scale;
      return cmp;
    }
    coarse = std::move(fine);
  }
}

}  // namespace specwave
