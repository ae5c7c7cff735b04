#include "specwave/analysis.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "specwave/errors.hpp"
#include "specwave/rng.hpp"
#include "specwave/threading.hpp"

namespace specwave {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

GNResult gn_admissible(const GNQuery& query) {
  if (query.dimension < 1)
    throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!std::isfinite(query.p) || query.p < 1.0)
    throw Error(ErrorCode::InvalidArgument, "p must be >= 1, got " + num(query.p));

  const double n = static_cast<double>(query.dimension);
  const double p = query.p;
  GNResult result;
  switch (query.family) {
    case OperatorFamily::HarmonicOscillator:
    case OperatorFamily::CompactManifoldLaplacian:
      // Every p in low dimension; p <= n/(n-2) for n >= 3, boundary included.
      result.admissible = query.dimension <= 2 || p * (n - 2.0) <= n;
      if (result.admissible) result.exponent = n * (p - 1.0) / (2.0 * p);
      break;
    case OperatorFamily::TwistedLaplacian:
      // First-order scale: every p on the line, p <= n/(n-1) for n >= 2.
      result.admissible = query.dimension <= 1 || p * (n - 1.0) <= n;
      if (result.admissible) result.exponent = n * (p - 1.0) / p;
      break;
  }
  return result;
}

EnvelopeFit fit_envelope(std::span<const double> times, std::span<const double> values,
                         double tail_fraction) {
  if (times.size() != values.size())
    throw Error(ErrorCode::DimensionMismatch, "times and values must have equal length");
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
    throw Error(ErrorCode::InvalidArgument, "tail_fraction must be in (0, 1]");

  const std::size_t total = times.size();
  const std::size_t start =
      total - static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
  std::vector<double> t, logv;
  for (std::size_t i = start; i < total; ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0)
      throw Error(ErrorCode::InvalidArgument, "sample times must be finite and >= 0");
    if (std::isfinite(values[i]) && values[i] > 0.0) {
      t.push_back(times[i]);
      logv.push_back(std::log(values[i]));
    }
  }
  if (t.size() < 8)
    throw Error(ErrorCode::FitFailure,
                "envelope fit needs at least 8 positive samples in the fitted window, found " +
                    std::to_string(t.size()));

  const auto rows = static_cast<Eigen::Index>(t.size());
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) target(i) = logv[i];

  // log v = log C + q log(1+t) - gamma t
  Eigen::MatrixXd design(rows, 3);
  for (Eigen::Index i = 0; i < rows; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log1p(t[i]);
    design(i, 2) = -t[i];
  }
  Eigen::VectorXd sol = design.colPivHouseholderQr().solve(target);

  EnvelopeFit fit;
  fit.gamma_hat = sol(2);
  if (fit.gamma_hat < 0.0) {
    // Growing envelopes are outside the model; pin gamma at 0 and refit the
    // polynomial part.
    Eigen::MatrixXd reduced = design.leftCols(2);
    Eigen::VectorXd sol2 = reduced.colPivHouseholderQr().solve(target);
    fit.gamma_hat = 0.0;
    fit.c_hat = std::exp(sol2(0));
    fit.q_hat = sol2(1);
    Eigen::VectorXd resid = reduced * sol2 - target;
    fit.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(rows));
    return fit;
  }
  fit.c_hat = std::exp(sol(0));
  fit.q_hat = sol(1);
  Eigen::VectorXd resid = design * sol - target;
  fit.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(rows));
  return fit;
}

ConvolutionProbeResult convolution_bound_probe(const Basis& basis, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const int n = basis.mode_count();

  ConvolutionProbeResult result;
  result.trials = trials;
  result.seed = seed;

  // max_xi of the quadrature L1 norm of e_xi: the Young-type constant the
  // coefficientwise product is measured against.
  double sup_l1 = 0.0;
  for (int i = 0; i < n; ++i) {
    double l1 = 0.0;
    for (int q = 0; q < basis.node_count(); ++q)
      l1 += basis.weights()(q) * std::abs(basis.eigenfunctions()(i, q));
    sup_l1 = std::max(sup_l1, l1);
  }
  result.sup_e_l1 = sup_l1;

  // One generator per trial, derived from (seed, trial), so the result is
  // identical at any thread count.
  std::vector<double> ratios(trials, 0.0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
    auto gen = seeded_rng(seed, trial + 1);
    Coeffs a(n), b(n);
    for (int i = 0; i < n; ++i) a(i) = standard_normal(gen);
    for (int i = 0; i < n; ++i) b(i) = standard_normal(gen);
    const double denom = a.norm() * b.norm();
    if (denom > 0.0) ratios[trial] = l_convolution(basis, a, b).norm() / denom;
  });
  for (double r : ratios) result.max_ratio = std::max(result.max_ratio, r);
  return result;
}

}  // namespace specwave
