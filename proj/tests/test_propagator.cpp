#include <doctest.h>

#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "specwave/basis.hpp"
#include "specwave/errors.hpp"
#include "specwave/propagator.hpp"
#include "specwave/rng.hpp"
#include "support/oracles.hpp"

using namespace specwave;

TEST_CASE("mode solutions match frozen reference values") {
  // u'' + u + u' = 0, u(0) = 1, u'(0) = 0, oscillatory branch.
  auto [u_osc, ut_osc] = mode_solution(1.0, {1.0, 0.0}, 1.0, 0.0, 1.0);
  CHECK(u_osc == doctest::Approx(0.65970015339170166).epsilon(1e-14));
  CHECK(ut_osc == doctest::Approx(-0.53350719511469298).epsilon(1e-14));

  // Double root at b = 2, lambda + m = 1: (1 + t) e^{-t}.
  auto [u_cr, ut_cr] = mode_solution(1.0, {2.0, 0.0}, 1.0, 0.0, 1.0);
  CHECK(u_cr == doctest::Approx(0.73575888234288464).epsilon(1e-14));

  // Overdamped b = 4, lambda = 1: slow root e^{(sqrt(3)-2) t}.
  auto [u_mono, ut_mono] = mode_solution(1.0, {4.0, 0.0}, 1.0, 0.0, 1.0);
  CHECK(u_mono == doctest::Approx(0.82226342390180952).epsilon(1e-13));
  auto [v_mono, vt_mono] = mode_solution(1.0, {4.0, 0.0}, 0.0, 1.0, 1.0);
  CHECK(v_mono == doctest::Approx(0.21390913026027935).epsilon(1e-13));
}

TEST_CASE("closed forms agree with an independent RK4 across regimes") {
  const std::vector<std::tuple<double, double, double>> cases = {
      {1.0, 1.0, 0.0},  {9.0, 1.0, 0.5},  {1.0, 2.0, 0.0},
      {0.25, 2.0, 0.0}, {1.0, 4.0, 0.0},  {0.04, 1.0, 0.01},
      {30.0, 0.5, 2.0}, {2.0, 6.0, -1.0},
  };
  for (auto [lambda, b, m] : cases) {
    for (double t : {0.3, 1.7, 6.0}) {
      auto [u, ut] = mode_solution(lambda, {b, m}, 0.8, -0.4, t);
      auto [ru, rut] = testsupport::rk4_damped_mode(lambda, b, m, 0.8, -0.4, t, 1e-4);
      const double scale = std::max({std::abs(ru), std::abs(rut), 1e-9});
      CHECK(std::abs(u - ru) / scale < 1e-6);
      CHECK(std::abs(ut - rut) / scale < 1e-6);
    }
  }
}

TEST_CASE("kernel initial values and derivative identities") {
  for (auto [lambda, b, m] : std::vector<std::tuple<double, double, double>>{
           {3.0, 1.0, 0.0}, {1.0, 2.0, 0.0}, {0.5, 3.0, 0.1}}) {
    ModeKernel kernel(lambda, {b, m});
    CHECK(kernel.r0(0.0) == 1.0);
    CHECK(kernel.r1(0.0) == 0.0);
    CHECK(kernel.r0_dot(0.0) == 0.0);
    CHECK(kernel.r1_dot(0.0) == 1.0);
    const double h = 1e-5;
    for (double t : {0.4, 2.0, 7.5}) {
      const double d0 = (kernel.r0(t + h) - kernel.r0(t - h)) / (2.0 * h);
      const double d1 = (kernel.r1(t + h) - kernel.r1(t - h)) / (2.0 * h);
      CHECK(d0 == doctest::Approx(kernel.r0_dot(t)).epsilon(1e-6));
      CHECK(d1 == doctest::Approx(kernel.r1_dot(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("generic branches meet the critical form at the regime boundary") {
  for (double b : {0.3, 1.0, 2.0, 4.0}) {
    const double threshold = 0.25 * b * b;
    ModeKernel critical(threshold, {b, 0.0});
    REQUIRE(critical.regime() == ModeRegime::Critical);
    ModeKernel above(threshold + 1e-6, {b, 0.0});
    ModeKernel below(threshold - 1e-6, {b, 0.0});
    REQUIRE(above.regime() == ModeRegime::Oscillatory);
    REQUIRE(below.regime() == ModeRegime::Monotone);
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.1 * i;
      CHECK(std::abs(above.r0(t) - critical.r0(t)) < 1e-4);
      CHECK(std::abs(below.r0(t) - critical.r0(t)) < 1e-4);
      CHECK(std::abs(above.r1(t) - critical.r1(t)) < 1e-4);
      CHECK(std::abs(below.r1(t) - critical.r1(t)) < 1e-4);
    }
  }
}

TEST_CASE("near-degenerate gaps are routed to the critical branch") {
  const double b = 2.0;
  ModeKernel kernel(1.0 + 1e-12, {b, 0.0});
  CHECK(kernel.regime() == ModeRegime::Critical);
  // Well outside the window the branch is generic.
  CHECK(ModeKernel(1.0 + 1e-6, {b, 0.0}).regime() == ModeRegime::Oscillatory);
}

TEST_CASE("linear solves apply the closed form mode by mode") {
  auto basis = make_harmonic_oscillator({1, 7, 12});
  auto gen = seeded_rng(42);
  Coeffs u0(8), u1(8);
  for (int i = 0; i < 8; ++i) {
    u0(i) = standard_normal(gen);
    u1(i) = standard_normal(gen);
  }
  const DampingParams params{1.5, 0.2};
  const std::vector<double> times = {0.0, 0.5, 2.0};
  auto trajectory = solve_linear(basis, params, u0, u1, times);
  REQUIRE(trajectory.size() == 3);
  CHECK(trajectory[0].u_hat == u0);
  CHECK(trajectory[0].ut_hat == u1);
  for (const auto& state : trajectory) {
    for (int i = 0; i < 8; ++i) {
      auto [u, ut] = mode_solution(basis.eigenvalue(i), params, u0(i), u1(i), state.t);
      CHECK(state.u_hat(i) == u);
      CHECK(state.ut_hat(i) == ut);
    }
  }
}

TEST_CASE("energy dissipates at rate b times the kinetic norm") {
  auto basis = make_harmonic_oscillator({1, 9, 16});
  auto gen = seeded_rng(7);
  Coeffs u0(10), u1(10);
  for (int i = 0; i < 10; ++i) {
    u0(i) = standard_normal(gen);
    u1(i) = standard_normal(gen);
  }
  const DampingParams params{0.8, 0.3};
  const double h = 1e-4;
  for (double t : {0.2, 1.0, 3.0}) {
    const std::vector<double> times = {t, t + h};
    const std::vector<double> times_back = {t - h, t};
    auto fwd = solve_linear(basis, params, u0, u1, times);
    auto bwd = solve_linear(basis, params, u0, u1, times_back);
    const double de =
        (energy(basis, params, fwd[1]) - energy(basis, params, bwd[0])) / (2.0 * h);
    const double expected = -params.b * fwd[0].ut_hat.squaredNorm();
    CHECK(de == doctest::Approx(expected).epsilon(1e-5));
  }
}

TEST_CASE("energy is the stored quadratic form") {
  auto basis = make_harmonic_oscillator({1, 2, 6});
  LinearState state;
  state.u_hat = Coeffs::Zero(3);
  state.ut_hat = Coeffs::Zero(3);
  state.u_hat(1) = 2.0;   // eigenvalue 3
  state.ut_hat(0) = 1.0;
  // (|ut|^2 + lambda |u|^2 + m |u|^2) / 2 = (1 + 12 + 0.5 * 4) / 2
  CHECK(energy(basis, {1.0, 0.5}, state) == doctest::Approx(7.5).epsilon(1e-15));
  // Negative m is reported signed.
  state.ut_hat(0) = 0.0;
  CHECK(energy(basis, {1.0, -4.0}, state) == doctest::Approx(0.5 * (12.0 - 16.0)));
}

TEST_CASE("decay classification covers the three regimes") {
  auto check_env = [](DecayEnvelope env, double gamma, double q) {
    CHECK(env.gamma == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(env.q == q);
  };
  check_env(classify_decay({1.0, 0.0}, 1.0, 0, 0.0, false), 0.5, 0.0);
  check_env(classify_decay({1.0, 0.0}, 1.0, 0, 0.0, true), 0.5, 0.5);
  check_env(classify_decay({2.0, 0.0}, 1.0, 0, 0.0, false), 1.0, 1.0);
  check_env(classify_decay({2.0, 0.0}, 1.0, 0, 0.0, true), 1.0, 1.5);
  check_env(classify_decay({4.0, 0.0}, 1.0, 0, 0.0, false), 0.26794919243112271, 0.0);
  check_env(classify_decay({4.0, 0.0}, 1.0, 0, 0.0, true), 0.26794919243112271, 0.5);
  // Exponents are uniform in the derivative counts.
  check_env(classify_decay({1.0, 0.0}, 1.0, 3, 1.5, false), 0.5, 0.0);
  CHECK(DecayEnvelope{0.5, 1.0}.bound(0.0) == 1.0);
}

TEST_CASE("standing assumptions are enforced with named messages") {
  try {
    classify_decay({0.0, 1.0}, 1.0, 0, 0.0, false);
    FAIL("expected assumption violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AssumptionViolation);
    CHECK(std::string(e.what()).find("b > 0") != std::string::npos);
  }
  try {
    validate_damping({1.0, 0.0}, 0.0);  // torus bottom with no mass term
    FAIL("expected assumption violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AssumptionViolation);
    CHECK(std::string(e.what()).find("lambda0 + m > 0") != std::string::npos);
  }
  CHECK_THROWS_AS(mode_solution(1.0, {1.0, 0.0}, 1.0, 0.0, -0.5), Error);
  CHECK_THROWS_AS(classify_decay({1.0, 0.0}, 1.0, -1, 0.0, false), Error);
  CHECK_THROWS_AS(classify_decay({1.0, 0.0}, 1.0, 0, 0.3, false), Error);
}
