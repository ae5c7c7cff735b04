#pragma once

#include <Eigen/Dense>
#include <complex>

#include "specwave/basis.hpp"

namespace specwave {

// Coefficient vectors are indexed by mode; grid vectors by quadrature node.
// Both are complex so intermediate states of complex-valued problems are
// representable; real data stays real to the last bit.
using Coeffs = Eigen::VectorXcd;
using GridFn = Eigen::VectorXcd;

// c_xi = sum_q w_q f(x_q) conj(e_xi(x_q))  (quadrature inner product)
Coeffs forward_transform(const Basis& basis, const GridFn& values);

// f(x_q) = sum_xi c_xi e_xi(x_q)
GridFn inverse_transform(const Basis& basis, const Coeffs& coeffs);

// Plain l2 norm of the coefficient vector; equals the quadrature L2 norm of
// the synthesized function up to the basis gram_defect.
double h_norm(const Basis& basis, const Coeffs& coeffs);

// (sum_xi lambda_xi^s |c_xi|^2)^(1/2). s = 0 reduces exactly to h_norm.
// Negative s with a zero eigenvalue carrying a nonzero coefficient is
// rejected (singular weight).
double sobolev_norm(const Basis& basis, const Coeffs& coeffs, double s);

// Quadrature L2 norm of a grid function: (sum_q w_q |f|^2)^(1/2).
double grid_norm(const Basis& basis, const GridFn& values);

// Coefficientwise product: the transform of the operator-adapted convolution
// of the two synthesized functions.
Coeffs l_convolution(const Basis& basis, const Coeffs& a, const Coeffs& b);

// c_xi -> lambda_xi^beta c_xi. beta = 0 is the identity (including on zero
// eigenvalues); negative beta requires a strictly positive spectrum.
Coeffs apply_l_power(const Basis& basis, const Coeffs& coeffs, double beta);

// Quadrature L2 distance between a grid function and its projection onto the
// retained modes, relative to the function's own norm: a cheap measure of
// how much of the input lives outside the truncation.
double projection_residual(const Basis& basis, const GridFn& values);

}  // namespace specwave
