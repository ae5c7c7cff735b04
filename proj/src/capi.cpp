#include "specwave.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <exception>
#include <new>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specwave/analysis.hpp"
#include "specwave/basis.hpp"
#include "specwave/errors.hpp"
#include "specwave/nonlinear.hpp"
#include "specwave/oracle.hpp"
#include "specwave/propagator.hpp"
#include "specwave/threading.hpp"
#include "specwave/transforms.hpp"

namespace {

thread_local std::string g_last_error;
thread_local std::vector<double> g_last_divergence_ratios;

sw_status map_code(specwave::ErrorCode code) {
  using specwave::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SW_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return SW_ERR_DIMENSION_MISMATCH;
    case ErrorCode::AssumptionViolation: return SW_ERR_ASSUMPTION_VIOLATION;
    case ErrorCode::Singular: return SW_ERR_SINGULAR;
    case ErrorCode::Unsupported: return SW_ERR_UNSUPPORTED;
    case ErrorCode::Divergence: return SW_ERR_DIVERGENCE;
    case ErrorCode::Validation: return SW_ERR_VALIDATION;
    case ErrorCode::FitFailure: return SW_ERR_FIT_FAILURE;
    case ErrorCode::Inconclusive: return SW_ERR_INCONCLUSIVE;
    case ErrorCode::Io: return SW_ERR_IO;
    case ErrorCode::Internal: return SW_ERR_INTERNAL;
  }
  return SW_ERR_INTERNAL;
}

template <typename Fn>
sw_status guarded(Fn&& fn) {
  try {
    fn();
    return SW_OK;
  } catch (const specwave::DivergenceError& e) {
    g_last_error = e.what();
    g_last_divergence_ratios = e.contraction_ratios();
    return map_code(e.code());
  } catch (const specwave::Error& e) {
    g_last_error = e.what();
    g_last_divergence_ratios.clear();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    g_last_divergence_ratios.clear();
    return SW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    g_last_divergence_ratios.clear();
    return SW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    g_last_divergence_ratios.clear();
    return SW_ERR_INTERNAL;
  }
}

sw_status invalid(const char* message) {
  g_last_error = message;
  g_last_divergence_ratios.clear();
  return SW_ERR_INVALID_ARGUMENT;
}

specwave::Coeffs to_coeffs(const double* data, int n) {
  specwave::Coeffs out(n);
  for (int i = 0; i < n; ++i) out(i) = data[i];
  return out;
}

void write_real(const specwave::Coeffs& src, double* dst) {
  if (!dst) return;
  for (Eigen::Index i = 0; i < src.size(); ++i) dst[i] = src(i).real();
}

}  // namespace

struct sw_basis {
  specwave::Basis impl;
};

struct sw_picard {
  specwave::Basis basis;
  specwave::DampingParams params;
  specwave::PicardRun run;
};

extern "C" {

const char* sw_last_error(void) { return g_last_error.c_str(); }

size_t sw_last_divergence_ratios(double* out, size_t cap) {
  const size_t count = g_last_divergence_ratios.size();
  if (out) {
    const size_t n = count < cap ? count : cap;
    for (size_t i = 0; i < n; ++i) out[i] = g_last_divergence_ratios[i];
  }
  return count;
}

void sw_set_threads(int count) { specwave::set_thread_count(count); }

int sw_get_threads(void) { return specwave::thread_count(); }

/* ---------------------------------------------------------------- bases -- */

sw_status sw_basis_harmonic_oscillator(int dimension, int max_degree, int quadrature_size,
                                       sw_basis** out) {
  if (!out) return invalid("out must not be NULL");
  return guarded([&] {
    specwave::HarmonicOscillatorSpec spec{dimension, max_degree, quadrature_size};
    *out = new sw_basis{specwave::make_harmonic_oscillator(spec)};
  });
}

sw_status sw_basis_torus(int dimension, int max_frequency, int grid_size, sw_basis** out) {
  if (!out) return invalid("out must not be NULL");
  return guarded([&] {
    specwave::TorusSpec spec{dimension, max_frequency, grid_size};
    *out = new sw_basis{specwave::make_torus(spec)};
  });
}

sw_status sw_basis_explicit(int dimension, int mode_count, int node_count,
                            const double* eigenvalues, const double* table, const double* nodes,
                            const double* weights, int bottom_is_infimum, double gram_tolerance,
                            sw_basis** out) {
  if (!out) return invalid("out must not be NULL");
  if (!eigenvalues || !table || !nodes || !weights)
    return invalid("eigenvalues, table, nodes and weights must not be NULL");
  if (mode_count < 1 || node_count < 1 || dimension < 1)
    return invalid("dimension, mode_count and node_count must be >= 1");
  return guarded([&] {
    specwave::ExplicitOperatorSpec spec;
    spec.dimension = dimension;
    spec.bottom_is_infimum = bottom_is_infimum != 0;
    spec.gram_tolerance = gram_tolerance > 0.0 ? gram_tolerance : 1e-8;
    spec.eigenvalues = Eigen::Map<const Eigen::VectorXd>(eigenvalues, mode_count);
    spec.eigenfunction_table =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            table, mode_count, node_count);
    spec.nodes =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            nodes, node_count, dimension);
    spec.weights = Eigen::Map<const Eigen::VectorXd>(weights, node_count);
    *out = new sw_basis{specwave::make_explicit(spec)};
  });
}

sw_status sw_basis_load(const char* path, sw_basis** out) {
  if (!out || !path) return invalid("path and out must not be NULL");
  return guarded([&] { *out = new sw_basis{specwave::load_basis_json(path)}; });
}

sw_status sw_basis_save(const sw_basis* basis, const char* path) {
  if (!basis || !path) return invalid("basis and path must not be NULL");
  return guarded([&] { specwave::save_basis_json(basis->impl, path); });
}

void sw_basis_free(sw_basis* basis) { delete basis; }

int sw_basis_dimension(const sw_basis* basis) { return basis ? basis->impl.dimension() : 0; }

int sw_basis_mode_count(const sw_basis* basis) { return basis ? basis->impl.mode_count() : 0; }

int sw_basis_node_count(const sw_basis* basis) { return basis ? basis->impl.node_count() : 0; }

sw_status sw_basis_eigenvalues(const sw_basis* basis, double* out) {
  if (!basis || !out) return invalid("basis and out must not be NULL");
  std::memcpy(out, basis->impl.eigenvalues().data(),
              sizeof(double) * static_cast<size_t>(basis->impl.mode_count()));
  return SW_OK;
}

sw_status sw_basis_nodes(const sw_basis* basis, double* out) {
  if (!basis || !out) return invalid("basis and out must not be NULL");
  const auto& nodes = basis->impl.nodes();
  for (Eigen::Index q = 0; q < nodes.rows(); ++q)
    for (Eigen::Index a = 0; a < nodes.cols(); ++a) *out++ = nodes(q, a);
  return SW_OK;
}

sw_status sw_basis_weights(const sw_basis* basis, double* out) {
  if (!basis || !out) return invalid("basis and out must not be NULL");
  std::memcpy(out, basis->impl.weights().data(),
              sizeof(double) * static_cast<size_t>(basis->impl.node_count()));
  return SW_OK;
}

double sw_basis_gram_defect(const sw_basis* basis) {
  return basis ? basis->impl.gram_defect() : 0.0;
}

double sw_basis_bottom(const sw_basis* basis, int* is_infimum) {
  if (!basis) return 0.0;
  if (is_infimum) *is_infimum = basis->impl.bottom_is_infimum() ? 1 : 0;
  return basis->impl.bottom();
}

/* ------------------------------------------------------------ transforms -- */

sw_status sw_forward_transform(const sw_basis* basis, const double* values, double* coeffs) {
  if (!basis || !values || !coeffs) return invalid("basis, values and coeffs must not be NULL");
  return guarded([&] {
    write_real(specwave::forward_transform(basis->impl,
                                           to_coeffs(values, basis->impl.node_count())),
               coeffs);
  });
}

sw_status sw_inverse_transform(const sw_basis* basis, const double* coeffs, double* values) {
  if (!basis || !values || !coeffs) return invalid("basis, coeffs and values must not be NULL");
  return guarded([&] {
    write_real(specwave::inverse_transform(basis->impl,
                                           to_coeffs(coeffs, basis->impl.mode_count())),
               values);
  });
}

sw_status sw_h_norm(const sw_basis* basis, const double* coeffs, double* out) {
  if (!basis || !coeffs || !out) return invalid("basis, coeffs and out must not be NULL");
  return guarded([&] {
    *out = specwave::h_norm(basis->impl, to_coeffs(coeffs, basis->impl.mode_count()));
  });
}

sw_status sw_sobolev_norm(const sw_basis* basis, const double* coeffs, double s, double* out) {
  if (!basis || !coeffs || !out) return invalid("basis, coeffs and out must not be NULL");
  return guarded([&] {
    *out = specwave::sobolev_norm(basis->impl, to_coeffs(coeffs, basis->impl.mode_count()), s);
  });
}

sw_status sw_grid_norm(const sw_basis* basis, const double* values, double* out) {
  if (!basis || !values || !out) return invalid("basis, values and out must not be NULL");
  return guarded([&] {
    *out = specwave::grid_norm(basis->impl, to_coeffs(values, basis->impl.node_count()));
  });
}

sw_status sw_l_convolution(const sw_basis* basis, const double* a, const double* b, double* out) {
  if (!basis || !a || !b || !out) return invalid("basis, a, b and out must not be NULL");
  return guarded([&] {
    const int n = basis->impl.mode_count();
    write_real(specwave::l_convolution(basis->impl, to_coeffs(a, n), to_coeffs(b, n)), out);
  });
}

sw_status sw_apply_l_power(const sw_basis* basis, const double* coeffs, double beta, double* out) {
  if (!basis || !coeffs || !out) return invalid("basis, coeffs and out must not be NULL");
  return guarded([&] {
    write_real(
        specwave::apply_l_power(basis->impl, to_coeffs(coeffs, basis->impl.mode_count()), beta),
        out);
  });
}

sw_status sw_projection_residual(const sw_basis* basis, const double* values, double* out) {
  if (!basis || !values || !out) return invalid("basis, values and out must not be NULL");
  return guarded([&] {
    *out = specwave::projection_residual(basis->impl, to_coeffs(values, basis->impl.node_count()));
  });
}

/* ------------------------------------------------------------ propagator -- */

sw_status sw_mode_solution(double lambda, double b, double m, double u0, double u1, double t,
                           double* u, double* ut) {
  return guarded([&] {
    auto [uu, vv] = specwave::mode_solution(lambda, specwave::DampingParams{b, m}, u0, u1, t);
    if (u) *u = uu;
    if (ut) *ut = vv;
  });
}

sw_status sw_mode_kernels(double lambda, double b, double m, double t, double* r0, double* r1,
                          double* r0_dot, double* r1_dot) {
  return guarded([&] {
    if (!(t >= 0.0))
      throw specwave::Error(specwave::ErrorCode::InvalidArgument, "t must be >= 0");
    specwave::ModeKernel kernel(lambda, specwave::DampingParams{b, m});
    if (r0) *r0 = kernel.r0(t);
    if (r1) *r1 = kernel.r1(t);
    if (r0_dot) *r0_dot = kernel.r0_dot(t);
    if (r1_dot) *r1_dot = kernel.r1_dot(t);
  });
}

sw_status sw_classify_decay(double b, double m, double lambda0, int alpha, double beta,
                            int nonlinear, double* gamma, double* q) {
  return guarded([&] {
    auto env = specwave::classify_decay(specwave::DampingParams{b, m}, lambda0, alpha, beta,
                                        nonlinear != 0);
    if (gamma) *gamma = env.gamma;
    if (q) *q = env.q;
  });
}

sw_status sw_solve_linear(const sw_basis* basis, double b, double m, const double* u0,
                          const double* u1, const double* times, size_t n_times, double* u_out,
                          double* ut_out) {
  if (!basis || !u0 || !u1 || !times) return invalid("basis, u0, u1 and times must not be NULL");
  return guarded([&] {
    const int n = basis->impl.mode_count();
    auto trajectory =
        specwave::solve_linear(basis->impl, specwave::DampingParams{b, m}, to_coeffs(u0, n),
                               to_coeffs(u1, n), std::span<const double>(times, n_times));
    for (size_t i = 0; i < trajectory.size(); ++i) {
      if (u_out) write_real(trajectory[i].u_hat, u_out + i * static_cast<size_t>(n));
      if (ut_out) write_real(trajectory[i].ut_hat, ut_out + i * static_cast<size_t>(n));
    }
  });
}

sw_status sw_energy(const sw_basis* basis, double b, double m, const double* u, const double* ut,
                    double* out) {
  if (!basis || !u || !ut || !out) return invalid("basis, u, ut and out must not be NULL");
  return guarded([&] {
    const int n = basis->impl.mode_count();
    specwave::LinearState state{0.0, to_coeffs(u, n), to_coeffs(ut, n)};
    *out = specwave::energy(basis->impl, specwave::DampingParams{b, m}, state);
  });
}

} /* extern "C" */

/* ------------------------------------------------------------- nonlinear -- */

namespace {

specwave::Nonlinearity make_nonlinearity(const specwave::Basis& basis,
                                         const sw_nonlinearity* nl) {
  using specwave::Error;
  using specwave::ErrorCode;
  if (!nl || nl->kind == SW_NONLINEARITY_NONE) return specwave::Nonlinearity::none();
  if (nl->kind == SW_NONLINEARITY_POWER)
    return specwave::Nonlinearity::semilinear_power(nl->p, nl->mu);
  if (nl->kind != SW_NONLINEARITY_NORM)
    throw Error(ErrorCode::InvalidArgument, "unknown nonlinearity kind");

  if (!nl->phi)
    throw Error(ErrorCode::InvalidArgument, "norm nonlinearity needs a phi coefficient vector");
  if (!std::isfinite(nl->p) || nl->p < 1.0)
    throw Error(ErrorCode::InvalidArgument, "norm nonlinearity needs p >= 1");
  if (!std::isfinite(nl->mu))
    throw Error(ErrorCode::InvalidArgument, "coupling mu must be finite");
  const int order = nl->order == 0 ? 1 : nl->order;
  if (order != 1 && order != 2)
    throw Error(ErrorCode::InvalidArgument, "norm nonlinearity order must be 1 or 2");
  if (nl->first_order_scale && order != 1)
    throw Error(ErrorCode::InvalidArgument, "first_order_scale applies to order 1 only");

  specwave::Coeffs phi = to_coeffs(nl->phi, basis.mode_count());
  const double p = nl->p;
  const double mu = nl->mu;

  if (order == 1) {
    specwave::GeneralFirstOrder general;
    const specwave::Basis* basis_ptr = &basis;
    if (nl->first_order_scale) {
      general.functional = [basis_ptr, phi, p, mu](const specwave::Coeffs& u,
                                                   const specwave::Coeffs& ut,
                                                   const specwave::Coeffs& hu) {
        const double norm = hu.norm() + specwave::apply_l_power(*basis_ptr, ut, 0.5).norm() +
                            specwave::apply_l_power(*basis_ptr, u, 1.0).norm();
        return specwave::Coeffs(mu * std::pow(norm, p) * phi);
      };
    } else {
      general.functional = [phi, p, mu](const specwave::Coeffs& u, const specwave::Coeffs& ut,
                                        const specwave::Coeffs& hu) {
        const double norm =
            std::sqrt(u.squaredNorm() + ut.squaredNorm() + hu.squaredNorm());
        return specwave::Coeffs(mu * std::pow(norm, p) * phi);
      };
    }
    return specwave::Nonlinearity::general(std::move(general), p);
  }

  specwave::HigherOrderFunctional higher;
  higher.order = 2;
  higher.evaluate = [phi, p, mu](const specwave::StateTuple& tuple, int i) {
    double sq = 0.0;
    for (const auto& level : tuple.time_derivatives) sq += level[i].squaredNorm();
    for (const auto& level : tuple.half_powers) sq += level[i].squaredNorm();
    return specwave::Coeffs(mu * std::pow(std::sqrt(sq), p) * phi);
  };
  return specwave::Nonlinearity::higher_order(std::move(higher), p);
}

specwave::PicardOptions make_options(const sw_picard_options* options) {
  specwave::PicardOptions opts;
  if (options) {
    if (options->tolerance > 0.0) opts.tolerance = options->tolerance;
    if (options->max_iterations > 0) opts.max_iterations = options->max_iterations;
    if (options->smallness_threshold > 0.0) opts.smallness_threshold = options->smallness_threshold;
    if (options->smallness_sigma >= 1.0) opts.smallness_sigma = options->smallness_sigma;
    opts.keep_iterates = options->keep_iterates != 0;
  }
  return opts;
}

}  // namespace

extern "C" {

sw_status sw_picard_solve(const sw_basis* basis, double b, double m,
                          const sw_nonlinearity* nonlinearity, const double* u0, const double* u1,
                          const double* times, size_t n_times, const sw_picard_options* options,
                          sw_picard** out) {
  if (!basis || !u0 || !u1 || !times || !out)
    return invalid("basis, u0, u1, times and out must not be NULL");
  return guarded([&] {
    const int n = basis->impl.mode_count();
    const specwave::DampingParams params{b, m};
    auto nl = make_nonlinearity(basis->impl, nonlinearity);
    auto run = specwave::picard_solve(basis->impl, params, nl, to_coeffs(u0, n), to_coeffs(u1, n),
                                      std::span<const double>(times, n_times), make_options(options));
    *out = new sw_picard{basis->impl, params, std::move(run)};
  });
}

void sw_picard_free(sw_picard* run) { delete run; }

int sw_picard_converged(const sw_picard* run) { return run && run->run.converged ? 1 : 0; }

int sw_picard_iterations(const sw_picard* run) { return run ? run->run.iterations : 0; }

size_t sw_picard_time_count(const sw_picard* run) { return run ? run->run.trajectory.size() : 0; }

sw_status sw_picard_state(const sw_picard* run, size_t index, double* u, double* ut) {
  if (!run) return invalid("run must not be NULL");
  if (index >= run->run.trajectory.size()) return invalid("state index out of range");
  write_real(run->run.trajectory[index].u_hat, u);
  write_real(run->run.trajectory[index].ut_hat, ut);
  return SW_OK;
}

size_t sw_picard_increment_count(const sw_picard* run) {
  return run ? run->run.increments.size() : 0;
}

sw_status sw_picard_increments(const sw_picard* run, double* out) {
  if (!run || !out) return invalid("run and out must not be NULL");
  for (double v : run->run.increments) *out++ = v;
  return SW_OK;
}

sw_status sw_picard_contraction_ratios(const sw_picard* run, double* out) {
  if (!run || !out) return invalid("run and out must not be NULL");
  for (double v : run->run.contraction_ratios) *out++ = v;
  return SW_OK;
}

sw_status sw_picard_iterate_z_norms(const sw_picard* run, double* out) {
  if (!run || !out) return invalid("run and out must not be NULL");
  for (double v : run->run.iterate_z_norms) *out++ = v;
  return SW_OK;
}

sw_status sw_picard_smallness(const sw_picard* run, double* epsilon, double* sigma,
                              double* threshold, int* within) {
  if (!run) return invalid("run must not be NULL");
  if (epsilon) *epsilon = run->run.smallness.epsilon;
  if (sigma) *sigma = run->run.smallness.sigma;
  if (threshold) *threshold = run->run.smallness.threshold;
  if (within) *within = run->run.smallness.within ? 1 : 0;
  return SW_OK;
}

sw_status sw_picard_envelope(const sw_picard* run, double* gamma, double* q, double* fitted_c) {
  if (!run) return invalid("run must not be NULL");
  if (gamma) *gamma = run->run.envelope.gamma;
  if (q) *q = run->run.envelope.q;
  if (fitted_c) *fitted_c = run->run.fitted_c;
  return SW_OK;
}

sw_status sw_picard_z_norm(const sw_picard* run, int weight, double* out) {
  if (!run || !out) return invalid("run and out must not be NULL");
  return guarded([&] {
    double mag = 0.0;
    for (const auto& s : run->run.source)
      if (s.size() > 0) mag = std::max(mag, s.cwiseAbs().maxCoeff());
    std::span<const specwave::Coeffs> source;
    if (mag > 0.0) source = run->run.source;
    *out = specwave::z_norm(run->basis, run->params, run->run.trajectory, run->run.envelope,
                            weight, source);
  });
}

sw_status sw_smallness_check(const sw_basis* basis, const double* u0, const double* u1,
                             double sigma, double threshold, double* epsilon, int* within) {
  if (!basis || !u0 || !u1) return invalid("basis, u0 and u1 must not be NULL");
  return guarded([&] {
    const int n = basis->impl.mode_count();
    auto report =
        specwave::smallness_check(basis->impl, to_coeffs(u0, n), to_coeffs(u1, n), sigma, threshold);
    if (epsilon) *epsilon = report.epsilon;
    if (within) *within = report.within ? 1 : 0;
  });
}

/* -------------------------------------------------------------- analysis -- */

sw_status sw_gn_admissible(int family, int dimension, double p, int* admissible,
                           double* exponent) {
  return guarded([&] {
    specwave::GNQuery query;
    switch (family) {
      case SW_FAMILY_HARMONIC_OSCILLATOR:
        query.family = specwave::OperatorFamily::HarmonicOscillator;
        break;
      case SW_FAMILY_COMPACT_MANIFOLD:
        query.family = specwave::OperatorFamily::CompactManifoldLaplacian;
        break;
      case SW_FAMILY_TWISTED:
        query.family = specwave::OperatorFamily::TwistedLaplacian;
        break;
      default:
        throw specwave::Error(specwave::ErrorCode::InvalidArgument, "unknown operator family");
    }
    query.dimension = dimension;
    query.p = p;
    auto result = specwave::gn_admissible(query);
    if (admissible) *admissible = result.admissible ? 1 : 0;
    if (exponent) *exponent = result.exponent.value_or(0.0);
  });
}

sw_status sw_fit_envelope(const double* times, const double* values, size_t count,
                          double tail_fraction, double* gamma, double* q, double* c,
                          double* residual) {
  if (!times || !values) return invalid("times and values must not be NULL");
  return guarded([&] {
    auto fit = specwave::fit_envelope(std::span<const double>(times, count),
                                      std::span<const double>(values, count),
                                      tail_fraction > 0.0 ? tail_fraction : 0.6);
    if (gamma) *gamma = fit.gamma_hat;
    if (q) *q = fit.q_hat;
    if (c) *c = fit.c_hat;
    if (residual) *residual = fit.residual;
  });
}

sw_status sw_convolution_probe(const sw_basis* basis, int trials, uint64_t seed,
                               double* max_ratio, double* sup_e_l1) {
  if (!basis) return invalid("basis must not be NULL");
  return guarded([&] {
    auto result = specwave::convolution_bound_probe(basis->impl, trials, seed);
    if (max_ratio) *max_ratio = result.max_ratio;
    if (sup_e_l1) *sup_e_l1 = result.sup_e_l1;
  });
}

/* ---------------------------------------------------------------- oracle -- */

sw_status sw_rk4_mode(double lambda, double b, double m, double u0, double u1, double t_end,
                      double dt, double* u, double* ut) {
  return guarded([&] {
    auto [uu, vv] = specwave::rk4_mode(lambda, specwave::DampingParams{b, m}, u0, u1, t_end, dt);
    if (u) *u = uu;
    if (ut) *ut = vv;
  });
}

sw_status sw_compare_oracle(const sw_basis* basis, double b, double m,
                            const sw_nonlinearity* nonlinearity, const double* u0,
                            const double* u1, const double* times, size_t n_times,
                            double tolerance, double initial_dt, int* conclusive, int* pass,
                            double* discrepancy, double* dt_used) {
  if (!basis || !u0 || !u1 || !times)
    return invalid("basis, u0, u1 and times must not be NULL");
  return guarded([&] {
    const int n = basis->impl.mode_count();
    const specwave::DampingParams params{b, m};
    auto nl = make_nonlinearity(basis->impl, nonlinearity);
    const auto u0_hat = to_coeffs(u0, n);
    const auto u1_hat = to_coeffs(u1, n);
    const std::span<const double> grid(times, n_times);

    specwave::Trajectory subject;
    if (nl.is_linear()) {
      subject = specwave::solve_linear(basis->impl, params, u0_hat, u1_hat, grid);
    } else {
      subject = specwave::picard_solve(basis->impl, params, nl, u0_hat, u1_hat, grid).trajectory;
    }
    auto cmp = specwave::compare_with_oracle(basis->impl, params, nl, u0_hat, u1_hat, subject,
                                             tolerance, initial_dt > 0.0 ? initial_dt : 1e-2);
    if (conclusive) *conclusive = cmp.conclusive ? 1 : 0;
    if (pass) *pass = cmp.pass ? 1 : 0;
    if (discrepancy) *discrepancy = cmp.discrepancy;
    if (dt_used) *dt_used = cmp.dt_used;
  });
}

} /* extern "C" */
