#include "specwave/transforms.hpp"

#include <cmath>
#include <string>

#include "specwave/errors.hpp"

namespace specwave {

namespace {

void check_coeff_size(const Basis& basis, const Coeffs& coeffs, const char* what) {
  if (coeffs.size() != basis.mode_count())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(basis.mode_count()) +
                    " coefficients, got " + std::to_string(coeffs.size()));
}

void check_grid_size(const Basis& basis, const GridFn& values, const char* what) {
  if (values.size() != basis.node_count())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(basis.node_count()) +
                    " node values, got " + std::to_string(values.size()));
}

}  // namespace

Coeffs forward_transform(const Basis& basis, const GridFn& values) {
  check_grid_size(basis, values, "forward_transform");
  // Real table: conj(e_xi) = e_xi, so this is table * (w .* f).
  return basis.eigenfunctions() * basis.weights().asDiagonal() * values;
}

GridFn inverse_transform(const Basis& basis, const Coeffs& coeffs) {
  check_coeff_size(basis, coeffs, "inverse_transform");
  return basis.eigenfunctions().transpose() * coeffs;
}

double h_norm(const Basis& basis, const Coeffs& coeffs) {
  check_coeff_size(basis, coeffs, "h_norm");
  return coeffs.norm();
}

double sobolev_norm(const Basis& basis, const Coeffs& coeffs, double s) {
  check_coeff_size(basis, coeffs, "sobolev_norm");
  if (s == 0.0) return coeffs.norm();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double mag2 = std::norm(coeffs(i));
    const double lam = basis.eigenvalue(static_cast<int>(i));
    if (lam == 0.0) {
      if (s > 0.0 || mag2 == 0.0) continue;
      throw Error(ErrorCode::Singular,
                  "sobolev_norm with s = " + std::to_string(s) + " is singular: mode " +
                      std::to_string(i) + " has eigenvalue 0 and a nonzero coefficient");
    }
    sum += std::pow(lam, s) * mag2;
  }
  return std::sqrt(sum);
}

double grid_norm(const Basis& basis, const GridFn& values) {
  check_grid_size(basis, values, "grid_norm");
  double sum = 0.0;
  for (Eigen::Index q = 0; q < values.size(); ++q) sum += basis.weights()(q) * std::norm(values(q));
  return std::sqrt(sum);
}

Coeffs l_convolution(const Basis& basis, const Coeffs& a, const Coeffs& b) {
  check_coeff_size(basis, a, "l_convolution (first argument)");
  check_coeff_size(basis, b, "l_convolution (second argument)");
  return a.cwiseProduct(b);
}

Coeffs apply_l_power(const Basis& basis, const Coeffs& coeffs, double beta) {
  check_coeff_size(basis, coeffs, "apply_l_power");
  if (beta == 0.0) return coeffs;
  if (beta < 0.0 && basis.bottom() == 0.0)
    throw Error(ErrorCode::Singular, "apply_l_power with beta = " + std::to_string(beta) +
                                         " is singular on a spectrum containing 0");
  Coeffs out(coeffs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    out(i) = std::pow(basis.eigenvalue(static_cast<int>(i)), beta) * coeffs(i);
  return out;
}

double projection_residual(const Basis& basis, const GridFn& values) {
  check_grid_size(basis, values, "projection_residual");
  const double total = grid_norm(basis, values);
  if (total == 0.0) return 0.0;
  const GridFn projected = inverse_transform(basis, forward_transform(basis, values));
  return grid_norm(basis, values - projected) / total;
}

}  // namespace specwave
