#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "specwave.h"

namespace {

sw_basis* oscillator_basis(int max_degree = 5, int quadrature = 8) {
  sw_basis* basis = nullptr;
  REQUIRE(sw_basis_harmonic_oscillator(1, max_degree, quadrature, &basis) == SW_OK);
  REQUIRE(basis != nullptr);
  return basis;
}

std::vector<double> uniform_grid(double t_end, int samples) {
  std::vector<double> times(samples);
  for (int i = 0; i < samples; ++i)
    times[i] = t_end * static_cast<double>(i) / (samples - 1);
  times[0] = 0.0;
  return times;
}

std::vector<double> decayed_profile(const sw_basis* basis, double amplitude) {
  const int n = sw_basis_mode_count(basis);
  std::vector<double> eigenvalues(n);
  sw_basis_eigenvalues(basis, eigenvalues.data());
  std::vector<double> data(n);
  for (int i = 0; i < n; ++i) data[i] = amplitude / (1.0 + eigenvalues[i]);
  return data;
}

}  // namespace

TEST_CASE("thread count plumbs through") {
  const int before = sw_get_threads();
  sw_set_threads(3);
  CHECK(sw_get_threads() == 3);
  sw_set_threads(0);
  CHECK(sw_get_threads() == 1);  // clamped
  sw_set_threads(before);
}

TEST_CASE("oscillator basis queries") {
  sw_basis* basis = oscillator_basis();
  CHECK(sw_basis_dimension(basis) == 1);
  CHECK(sw_basis_mode_count(basis) == 6);
  CHECK(sw_basis_node_count(basis) == 8);
  CHECK(sw_basis_gram_defect(basis) <= 1e-10);

  std::vector<double> eigenvalues(6);
  CHECK(sw_basis_eigenvalues(basis, eigenvalues.data()) == SW_OK);
  for (int k = 0; k < 6; ++k) CHECK(eigenvalues[k] == 2.0 * k + 1.0);

  int is_infimum = 0;
  CHECK(sw_basis_bottom(basis, &is_infimum) == 1.0);
  CHECK(is_infimum == 1);

  std::vector<double> nodes(8), weights(8);
  CHECK(sw_basis_nodes(basis, nodes.data()) == SW_OK);
  CHECK(sw_basis_weights(basis, weights.data()) == SW_OK);
  for (int q = 0; q < 8; ++q) CHECK(weights[q] > 0.0);
  for (int q = 1; q < 8; ++q) CHECK(nodes[q] > nodes[q - 1]);

  CHECK(sw_basis_eigenvalues(basis, nullptr) == SW_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(sw_last_error()) > 0);
  sw_basis_free(basis);
}

TEST_CASE("basis creation rejects bad specs with a message") {
  sw_basis* basis = nullptr;
  CHECK(sw_basis_harmonic_oscillator(0, 3, 0, &basis) == SW_ERR_INVALID_ARGUMENT);
  CHECK(basis == nullptr);
  CHECK(std::strlen(sw_last_error()) > 0);
  CHECK(sw_basis_harmonic_oscillator(1, 3, 0, nullptr) == SW_ERR_INVALID_ARGUMENT);
  CHECK(sw_basis_torus(1, 2, 4, &basis) == SW_ERR_INVALID_ARGUMENT);  // grid too coarse

  // Non-orthonormal explicit table.
  const double eigenvalues[2] = {1.0, 2.0};
  const double table[4] = {1.0, 0.0, 0.5, 1.0};
  const double nodes[2] = {0.0, 1.0};
  const double weights[2] = {1.0, 1.0};
  CHECK(sw_basis_explicit(1, 2, 2, eigenvalues, table, nodes, weights, 1, 0.0, &basis) ==
        SW_ERR_VALIDATION);
  CHECK(std::string(sw_last_error()).find("Gram") != std::string::npos);
}

TEST_CASE("explicit basis and JSON round trip") {
  const double eigenvalues[2] = {1.0, 3.0};
  const double table[4] = {1.0, 0.0, 0.0, 1.0};
  const double nodes[2] = {0.0, 1.0};
  const double weights[2] = {1.0, 1.0};
  sw_basis* basis = nullptr;
  REQUIRE(sw_basis_explicit(1, 2, 2, eigenvalues, table, nodes, weights, 0, 0.0, &basis) == SW_OK);
  int is_infimum = 1;
  CHECK(sw_basis_bottom(basis, &is_infimum) == 1.0);
  CHECK(is_infimum == 0);

  const char* path = "capi_roundtrip_basis.json";
  REQUIRE(sw_basis_save(basis, path) == SW_OK);
  sw_basis* loaded = nullptr;
  REQUIRE(sw_basis_load(path, &loaded) == SW_OK);
  CHECK(sw_basis_mode_count(loaded) == 2);
  double ev[2], w[2], nd[2];
  CHECK(sw_basis_eigenvalues(loaded, ev) == SW_OK);
  CHECK(sw_basis_weights(loaded, w) == SW_OK);
  CHECK(sw_basis_nodes(loaded, nd) == SW_OK);
  for (int i = 0; i < 2; ++i) {
    CHECK(ev[i] == eigenvalues[i]);
    CHECK(w[i] == weights[i]);
    CHECK(nd[i] == nodes[i]);
  }
  int loaded_infimum = 1;
  sw_basis_bottom(loaded, &loaded_infimum);
  CHECK(loaded_infimum == 0);
  sw_basis_free(loaded);
  sw_basis_free(basis);
  std::remove(path);

  sw_basis* missing = nullptr;
  CHECK(sw_basis_load("no_such_basis_file.json", &missing) == SW_ERR_IO);
  CHECK(missing == nullptr);
}

TEST_CASE("transforms through the C surface") {
  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  const int nodes = sw_basis_node_count(basis);

  std::vector<double> coeffs = {0.4, -0.2, 0.1, 0.05, -0.3, 0.2};
  std::vector<double> values(nodes), back(n);
  REQUIRE(sw_inverse_transform(basis, coeffs.data(), values.data()) == SW_OK);
  REQUIRE(sw_forward_transform(basis, values.data(), back.data()) == SW_OK);
  for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(coeffs[i]).epsilon(1e-12));

  double h = 0.0, grid = 0.0;
  REQUIRE(sw_h_norm(basis, coeffs.data(), &h) == SW_OK);
  REQUIRE(sw_grid_norm(basis, values.data(), &grid) == SW_OK);
  double expected = 0.0;
  for (double c : coeffs) expected += c * c;
  expected = std::sqrt(expected);
  CHECK(h == doctest::Approx(expected).epsilon(1e-14));
  CHECK(grid == doctest::Approx(expected).epsilon(1e-10));  // Plancherel

  double sob = 0.0;
  REQUIRE(sw_sobolev_norm(basis, coeffs.data(), 2.0, &sob) == SW_OK);
  double expected_sob = 0.0;
  for (int k = 0; k < n; ++k)
    expected_sob += std::pow(2.0 * k + 1.0, 2.0) * coeffs[k] * coeffs[k];
  CHECK(sob == doctest::Approx(std::sqrt(expected_sob)).epsilon(1e-13));

  std::vector<double> a = {1, 2, 3, 4, 5, 6}, b = {2, 0, -1, 0.5, 1, -2}, prod(n);
  REQUIRE(sw_l_convolution(basis, a.data(), b.data(), prod.data()) == SW_OK);
  for (int i = 0; i < n; ++i) CHECK(prod[i] == a[i] * b[i]);

  std::vector<double> powered(n);
  REQUIRE(sw_apply_l_power(basis, coeffs.data(), 1.0, powered.data()) == SW_OK);
  for (int k = 0; k < n; ++k)
    CHECK(powered[k] == doctest::Approx((2.0 * k + 1.0) * coeffs[k]).epsilon(1e-14));

  double resid = 1.0;
  REQUIRE(sw_projection_residual(basis, values.data(), &resid) == SW_OK);
  CHECK(resid < 1e-10);

  CHECK(sw_h_norm(nullptr, coeffs.data(), &h) == SW_ERR_INVALID_ARGUMENT);
  CHECK(sw_h_norm(basis, nullptr, &h) == SW_ERR_INVALID_ARGUMENT);
  sw_basis_free(basis);
}

TEST_CASE("negative powers on a torus bottom eigenvalue are singular") {
  sw_basis* torus = nullptr;
  REQUIRE(sw_basis_torus(1, 2, 0, &torus) == SW_OK);
  const int n = sw_basis_mode_count(torus);
  std::vector<double> coeffs(n, 1.0), out(n);
  CHECK(sw_apply_l_power(torus, coeffs.data(), -0.5, out.data()) == SW_ERR_SINGULAR);
  sw_basis_free(torus);
}

TEST_CASE("closed-form mode values and kernels") {
  double u = 0.0, ut = 0.0;
  REQUIRE(sw_mode_solution(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, &u, &ut) == SW_OK);
  CHECK(u == doctest::Approx(0.65970015339170166).epsilon(1e-15));
  CHECK(ut == doctest::Approx(-0.53350719511469298).epsilon(1e-15));

  double r0 = 0.0, r1 = 0.0, r1_dot = 0.0;
  REQUIRE(sw_mode_kernels(1.0, 2.0, 0.0, 1.0, &r0, &r1, nullptr, &r1_dot) == SW_OK);
  CHECK(r0 == doctest::Approx(0.73575888234288464).epsilon(1e-15));
  CHECK(r1 == doctest::Approx(0.36787944117144232).epsilon(1e-15));
  CHECK(r1_dot == doctest::Approx(0.0).scale(1.0).epsilon(1e-16));

  REQUIRE(sw_mode_kernels(1.0, 4.0, 0.0, 1.0, &r0, &r1, nullptr, nullptr) == SW_OK);
  CHECK(r0 == doctest::Approx(0.82226342390180952).epsilon(1e-15));
  CHECK(r1 == doctest::Approx(0.21390913026027935).epsilon(1e-15));

  CHECK(sw_mode_kernels(1.0, 2.0, 0.0, -1.0, &r0, &r1, nullptr, nullptr) ==
        SW_ERR_INVALID_ARGUMENT);
  CHECK(sw_mode_solution(1.0, 0.0, 0.0, 1.0, 0.0, 1.0, &u, &ut) == SW_ERR_ASSUMPTION_VIOLATION);

  double gamma = 0.0, q = -1.0;
  REQUIRE(sw_classify_decay(4.0, 0.0, 1.0, 0, 0.0, 0, &gamma, &q) == SW_OK);
  CHECK(gamma == doctest::Approx(0.26794919243112271).epsilon(1e-15));
  CHECK(q == 0.0);
  REQUIRE(sw_classify_decay(1.0, 0.0, 1.0, 0, 0.0, 1, &gamma, &q) == SW_OK);
  CHECK(gamma == 0.5);
  CHECK(q == 0.5);
}

TEST_CASE("linear solve rows match the per-mode closed form") {
  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  std::vector<double> eigenvalues(n);
  sw_basis_eigenvalues(basis, eigenvalues.data());
  auto u0 = decayed_profile(basis, 1.0);
  std::vector<double> u1(n, 0.25);
  const auto times = uniform_grid(3.0, 7);

  std::vector<double> u_out(times.size() * n), ut_out(times.size() * n);
  REQUIRE(sw_solve_linear(basis, 1.0, 0.0, u0.data(), u1.data(), times.data(), times.size(),
                          u_out.data(), ut_out.data()) == SW_OK);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (int k = 0; k < n; ++k) {
      double mu = 0.0, mut = 0.0;
      REQUIRE(sw_mode_solution(eigenvalues[k], 1.0, 0.0, u0[k], u1[k], times[i], &mu, &mut) ==
              SW_OK);
      CHECK(u_out[i * n + k] == mu);
      CHECK(ut_out[i * n + k] == mut);
    }
  }

  // ut output alone is fine.
  REQUIRE(sw_solve_linear(basis, 1.0, 0.0, u0.data(), u1.data(), times.data(), times.size(),
                          nullptr, ut_out.data()) == SW_OK);
  CHECK(sw_solve_linear(nullptr, 1.0, 0.0, u0.data(), u1.data(), times.data(), times.size(),
                        u_out.data(), nullptr) == SW_ERR_INVALID_ARGUMENT);
  sw_basis_free(basis);
}

TEST_CASE("torus solves need a positive mass shift") {
  sw_basis* torus = nullptr;
  REQUIRE(sw_basis_torus(1, 2, 0, &torus) == SW_OK);
  const int n = sw_basis_mode_count(torus);
  std::vector<double> u0(n, 0.1), u1(n, 0.0);
  const auto times = uniform_grid(1.0, 5);
  std::vector<double> u_out(times.size() * n);

  CHECK(sw_solve_linear(torus, 1.0, 0.0, u0.data(), u1.data(), times.data(), times.size(),
                        u_out.data(), nullptr) == SW_ERR_ASSUMPTION_VIOLATION);
  CHECK(std::string(sw_last_error()).find("lambda0 + m") != std::string::npos);
  CHECK(sw_solve_linear(torus, 1.0, 0.5, u0.data(), u1.data(), times.data(), times.size(),
                        u_out.data(), nullptr) == SW_OK);
  sw_basis_free(torus);
}

TEST_CASE("energy in the coefficient metric") {
  const double eigenvalues[1] = {3.0};
  const double table[1] = {1.0};
  const double nodes[1] = {0.0};
  const double weights[1] = {1.0};
  sw_basis* basis = nullptr;
  REQUIRE(sw_basis_explicit(1, 1, 1, eigenvalues, table, nodes, weights, 1, 0.0, &basis) == SW_OK);
  const double u[1] = {2.0}, ut[1] = {1.0};
  double e = 0.0;
  REQUIRE(sw_energy(basis, 1.0, 1.0, u, ut, &e) == SW_OK);
  CHECK(e == doctest::Approx(8.5).epsilon(1e-15));  // (1 + 3*4 + 1*4) / 2
  sw_basis_free(basis);
}

TEST_CASE("fixed-point solve with a cubic power term") {
  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  auto u0 = decayed_profile(basis, 5e-3);
  std::vector<double> u1(n, 0.0);
  const auto times = uniform_grid(4.0, 81);

  sw_nonlinearity nl{};
  nl.kind = SW_NONLINEARITY_POWER;
  nl.p = 3.0;
  nl.mu = 0.1;

  sw_picard* run = nullptr;
  REQUIRE(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                          nullptr, &run) == SW_OK);
  REQUIRE(run != nullptr);
  CHECK(sw_picard_converged(run) == 1);
  const int iters = sw_picard_iterations(run);
  CHECK(iters >= 1);
  CHECK(sw_picard_time_count(run) == times.size());

  std::vector<double> u_last(n), ut_last(n);
  REQUIRE(sw_picard_state(run, times.size() - 1, u_last.data(), ut_last.data()) == SW_OK);
  for (int k = 0; k < n; ++k) CHECK(std::isfinite(u_last[k]));
  CHECK(sw_picard_state(run, times.size(), u_last.data(), nullptr) == SW_ERR_INVALID_ARGUMENT);

  const size_t inc_count = sw_picard_increment_count(run);
  CHECK(inc_count == static_cast<size_t>(iters));
  std::vector<double> increments(inc_count), ratios(inc_count > 0 ? inc_count - 1 : 0);
  REQUIRE(sw_picard_increments(run, increments.data()) == SW_OK);
  CHECK(increments.back() < 1e-10);
  if (!ratios.empty()) {
    REQUIRE(sw_picard_contraction_ratios(run, ratios.data()) == SW_OK);
    CHECK(ratios.back() < 1.0);
  }

  std::vector<double> z_norms(static_cast<size_t>(iters) + 1);
  REQUIRE(sw_picard_iterate_z_norms(run, z_norms.data()) == SW_OK);
  for (double z : z_norms) CHECK(std::isfinite(z));

  double epsilon = 0.0, sigma = 0.0, threshold = 0.0;
  int within = 0;
  REQUIRE(sw_picard_smallness(run, &epsilon, &sigma, &threshold, &within) == SW_OK);
  CHECK(sigma == 1.0);
  CHECK(threshold == 1e-2);
  CHECK(epsilon > 0.0);
  CHECK(within == 1);

  double gamma = 0.0, q = 0.0, fitted_c = 0.0;
  REQUIRE(sw_picard_envelope(run, &gamma, &q, &fitted_c) == SW_OK);
  CHECK(gamma == 0.5);
  CHECK(q == 0.5);
  CHECK(fitted_c > 0.0);

  double z1 = 0.0, z2 = 0.0, z3 = 0.0;
  REQUIRE(sw_picard_z_norm(run, 1, &z1) == SW_OK);
  CHECK(z1 == z_norms[static_cast<size_t>(iters)]);
  REQUIRE(sw_picard_z_norm(run, 2, &z2) == SW_OK);
  CHECK(z2 >= z1);
  CHECK(sw_picard_z_norm(run, 3, &z3) == SW_ERR_UNSUPPORTED);

  sw_picard_free(run);
  sw_basis_free(basis);
}

TEST_CASE("a linear fixed-point run reproduces the direct solve exactly") {
  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  auto u0 = decayed_profile(basis, 1.0);
  std::vector<double> u1(n, -0.1);
  const auto times = uniform_grid(2.0, 21);

  sw_picard* run = nullptr;
  REQUIRE(sw_picard_solve(basis, 1.0, 0.0, nullptr, u0.data(), u1.data(), times.data(),
                          times.size(), nullptr, &run) == SW_OK);
  CHECK(sw_picard_converged(run) == 1);
  CHECK(sw_picard_iterations(run) == 1);

  std::vector<double> direct_u(times.size() * n), direct_ut(times.size() * n);
  REQUIRE(sw_solve_linear(basis, 1.0, 0.0, u0.data(), u1.data(), times.data(), times.size(),
                          direct_u.data(), direct_ut.data()) == SW_OK);
  std::vector<double> u(n), ut(n);
  for (std::size_t i = 0; i < times.size(); ++i) {
    REQUIRE(sw_picard_state(run, i, u.data(), ut.data()) == SW_OK);
    for (int k = 0; k < n; ++k) {
      CHECK(u[k] == direct_u[i * n + k]);
      CHECK(ut[k] == direct_ut[i * n + k]);
    }
  }
  // Homogeneous recursion supports any derivative weight.
  double z3 = 0.0;
  CHECK(sw_picard_z_norm(run, 3, &z3) == SW_OK);
  CHECK(std::isfinite(z3));
  sw_picard_free(run);
  sw_basis_free(basis);
}

TEST_CASE("diverging data is reported through the status code") {
  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  auto u0 = decayed_profile(basis, 10.0);
  std::vector<double> u1(n, 1.0);
  const auto times = uniform_grid(6.0, 121);

  sw_nonlinearity nl{};
  nl.kind = SW_NONLINEARITY_POWER;
  nl.p = 3.0;
  nl.mu = 1.0;

  sw_picard* run = nullptr;
  CHECK(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                        nullptr, &run) == SW_ERR_DIVERGENCE);
  CHECK(run == nullptr);
  CHECK(std::string(sw_last_error()).find("diverge") != std::string::npos);

  // The aborted run leaves its contraction ratios behind for diagnostics;
  // they are cleared by the next unrelated failure.
  const size_t count = sw_last_divergence_ratios(nullptr, 0);
  REQUIRE(count >= 3);
  std::vector<double> ratios(count);
  CHECK(sw_last_divergence_ratios(ratios.data(), count) == count);
  for (double r : ratios) CHECK(r > 1.0);
  double one = 0.0;
  CHECK(sw_last_divergence_ratios(&one, 1) == count);
  CHECK(one == ratios[0]);
  CHECK(sw_h_norm(nullptr, u0.data(), &one) == SW_ERR_INVALID_ARGUMENT);
  CHECK(sw_last_divergence_ratios(nullptr, 0) == 0);
  sw_basis_free(basis);
}

TEST_CASE("norm-coupled nonlinearities in all three configurations") {
  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  auto u0 = decayed_profile(basis, 5e-3);
  std::vector<double> u1(n, 0.0);
  const auto times = uniform_grid(3.0, 61);
  std::vector<double> phi(n, 0.0);
  phi[0] = 1.0;

  sw_nonlinearity nl{};
  nl.kind = SW_NONLINEARITY_NORM;
  nl.p = 2.0;
  nl.mu = 0.05;
  nl.phi = phi.data();

  sw_picard* run = nullptr;
  REQUIRE(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                          nullptr, &run) == SW_OK);
  CHECK(sw_picard_converged(run) == 1);
  CHECK(sw_picard_iterations(run) >= 2);  // coupling is active
  sw_picard_free(run);
  run = nullptr;

  nl.first_order_scale = 1;
  REQUIRE(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                          nullptr, &run) == SW_OK);
  CHECK(sw_picard_converged(run) == 1);
  sw_picard_free(run);
  run = nullptr;

  nl.first_order_scale = 0;
  nl.order = 2;
  REQUIRE(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                          nullptr, &run) == SW_OK);
  CHECK(sw_picard_converged(run) == 1);
  sw_picard_free(run);
  run = nullptr;

  nl.first_order_scale = 1;  // incompatible with order 2
  CHECK(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                        nullptr, &run) == SW_ERR_INVALID_ARGUMENT);
  nl.first_order_scale = 0;
  nl.order = 1;
  nl.phi = nullptr;
  CHECK(sw_picard_solve(basis, 1.0, 0.0, &nl, u0.data(), u1.data(), times.data(), times.size(),
                        nullptr, &run) == SW_ERR_INVALID_ARGUMENT);
  sw_basis_free(basis);
}

TEST_CASE("smallness check surfaces the graded norms") {
  const double eigenvalues[2] = {1.0, 3.0};
  const double table[4] = {1.0, 0.0, 0.0, 1.0};
  const double nodes[2] = {0.0, 1.0};
  const double weights[2] = {1.0, 1.0};
  sw_basis* basis = nullptr;
  REQUIRE(sw_basis_explicit(1, 2, 2, eigenvalues, table, nodes, weights, 1, 0.0, &basis) == SW_OK);
  const double u0[2] = {0.0, 3e-3}, u1[2] = {4e-3, 0.0};
  double epsilon = 0.0;
  int within = 0;
  REQUIRE(sw_smallness_check(basis, u0, u1, 1.0, 1e-2, &epsilon, &within) == SW_OK);
  CHECK(epsilon == doctest::Approx(std::sqrt(3.0) * 3e-3 + 4e-3).epsilon(1e-14));
  CHECK(within == 1);
  CHECK(sw_smallness_check(basis, u0, u1, 0.5, 1e-2, &epsilon, &within) ==
        SW_ERR_INVALID_ARGUMENT);
  sw_basis_free(basis);
}

TEST_CASE("admissibility, envelope fit and product probe") {
  int admissible = 0;
  double exponent = 0.0;
  REQUIRE(sw_gn_admissible(SW_FAMILY_HARMONIC_OSCILLATOR, 3, 3.0, &admissible, &exponent) ==
          SW_OK);
  CHECK(admissible == 1);
  CHECK(exponent == 1.0);
  REQUIRE(sw_gn_admissible(SW_FAMILY_TWISTED, 2, 3.0, &admissible, &exponent) == SW_OK);
  CHECK(admissible == 0);
  CHECK(sw_gn_admissible(99, 2, 2.0, &admissible, &exponent) == SW_ERR_INVALID_ARGUMENT);

  std::vector<double> times, values;
  for (int i = 0; i <= 200; ++i) {
    const double t = 12.0 * i / 200.0;
    times.push_back(t);
    values.push_back(2.3 * std::pow(1.0 + t, 1.0) * std::exp(-0.7 * t));
  }
  double gamma = 0.0, q = 0.0, c = 0.0, residual = 1.0;
  REQUIRE(sw_fit_envelope(times.data(), values.data(), times.size(), 0.0, &gamma, &q, &c,
                          &residual) == SW_OK);
  CHECK(gamma == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(q == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(c == doctest::Approx(2.3).epsilon(1e-8));
  CHECK(residual < 1e-9);
  CHECK(sw_fit_envelope(times.data(), values.data(), 3, 0.0, &gamma, &q, &c, nullptr) ==
        SW_ERR_FIT_FAILURE);
  CHECK(sw_fit_envelope(nullptr, values.data(), times.size(), 0.0, &gamma, &q, &c, nullptr) ==
        SW_ERR_INVALID_ARGUMENT);

  sw_basis* basis = oscillator_basis(15, 24);
  double ratio1 = 0.0, sup1 = 0.0, ratio2 = 0.0, sup2 = 0.0;
  REQUIRE(sw_convolution_probe(basis, 32, 99, &ratio1, &sup1) == SW_OK);
  REQUIRE(sw_convolution_probe(basis, 32, 99, &ratio2, &sup2) == SW_OK);
  CHECK(ratio1 == ratio2);
  CHECK(sup1 == sup2);
  CHECK(ratio1 > 0.0);
  CHECK(ratio1 <= sup1 + 1e-9);
  CHECK(sw_convolution_probe(basis, 0, 99, &ratio1, &sup1) == SW_ERR_INVALID_ARGUMENT);
  sw_basis_free(basis);
}

TEST_CASE("reference integrator and comparison harness") {
  double u = 0.0, ut = 0.0, u_exact = 0.0, ut_exact = 0.0;
  REQUIRE(sw_rk4_mode(2.0, 1.0, 0.1, 0.7, -0.4, 3.0, 1e-4, &u, &ut) == SW_OK);
  REQUIRE(sw_mode_solution(2.0, 1.0, 0.1, 0.7, -0.4, 3.0, &u_exact, &ut_exact) == SW_OK);
  CHECK(u == doctest::Approx(u_exact).epsilon(1e-8));
  CHECK(ut == doctest::Approx(ut_exact).epsilon(1e-8));
  CHECK(sw_rk4_mode(2.0, 1.0, 0.1, 0.7, -0.4, 3.0, 0.0, &u, &ut) == SW_ERR_INVALID_ARGUMENT);

  sw_basis* basis = oscillator_basis();
  const int n = sw_basis_mode_count(basis);
  auto u0 = decayed_profile(basis, 1.0);
  std::vector<double> u1(n, 0.0);
  const auto times = uniform_grid(3.0, 31);

  int conclusive = 0, pass = 0;
  double discrepancy = 1.0, dt_used = 0.0;
  REQUIRE(sw_compare_oracle(basis, 1.0, 0.0, nullptr, u0.data(), u1.data(), times.data(),
                            times.size(), 1e-6, 0.0, &conclusive, &pass, &discrepancy,
                            &dt_used) == SW_OK);
  CHECK(conclusive == 1);
  CHECK(pass == 1);
  CHECK(discrepancy <= 1e-6);
  CHECK(dt_used > 0.0);

  REQUIRE(sw_compare_oracle(basis, 1.0, 0.0, nullptr, u0.data(), u1.data(), times.data(),
                            times.size(), 1e-16, 0.0, &conclusive, &pass, &discrepancy,
                            &dt_used) == SW_OK);
  CHECK(conclusive == 0);
  CHECK(pass == 0);
  sw_basis_free(basis);
}
