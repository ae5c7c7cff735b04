#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "specwave/basis.hpp"
#include "specwave/errors.hpp"
#include "support/oracles.hpp"

using namespace specwave;

namespace {

ExplicitOperatorSpec two_mode_toy() {
  // Eigenfunctions 1/sqrt(2) and x/... on nodes {-1, +1} with unit weights:
  // rows (1,1)/sqrt(2) and (-1,1)/sqrt(2) are orthonormal under w = (1, 1).
  ExplicitOperatorSpec spec;
  spec.dimension = 1;
  spec.eigenvalues = Eigen::Vector2d(3.0, 1.0);  // deliberately unsorted
  spec.eigenfunction_table.resize(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  spec.eigenfunction_table << -r, r, r, r;  // mode for eigenvalue 3 first
  spec.nodes.resize(2, 1);
  spec.nodes << -1.0, 1.0;
  spec.weights = Eigen::Vector2d(1.0, 1.0);
  return spec;
}

}  // namespace

TEST_CASE("harmonic oscillator eigenvalues are 2k+1 in one dimension") {
  auto basis = make_harmonic_oscillator({1, 7, 16});
  REQUIRE(basis.mode_count() == 8);
  CHECK(basis.node_count() == 16);
  for (int k = 0; k < 8; ++k) CHECK(basis.eigenvalue(k) == 2.0 * k + 1.0);
  CHECK(basis.bottom() == 1.0);
  CHECK(basis.bottom_is_infimum());
  CHECK(basis.dimension() == 1);
}

TEST_CASE("harmonic oscillator table matches the explicit Hermite functions") {
  auto basis = make_harmonic_oscillator({1, 6, 12});
  for (int k = 0; k <= 6; ++k) {
    for (int q = 0; q < basis.node_count(); ++q) {
      const double x = basis.nodes()(q, 0);
      CHECK(basis.eigenfunctions()(k, q) ==
            doctest::Approx(testsupport::hermite_function_direct(k, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("harmonic oscillator ground state is the normalized Gaussian") {
  auto basis = make_harmonic_oscillator({2, 2, 6});
  CHECK(basis.bottom() == 2.0);  // n = 2
  const double c = std::pow(std::numbers::pi, -0.5);
  for (int q = 0; q < basis.node_count(); ++q) {
    const double x = basis.nodes()(q, 0), y = basis.nodes()(q, 1);
    CHECK(basis.eigenfunctions()(0, q) ==
          doctest::Approx(c * std::exp(-0.5 * (x * x + y * y))).epsilon(1e-13));
  }
}

TEST_CASE("quadrature nodes are the Hermite polynomial roots") {
  auto basis = make_harmonic_oscillator({1, 5, 10});
  for (int q = 0; q < 10; ++q)
    CHECK(std::abs(testsupport::hermite_function_direct(10, basis.nodes()(q, 0))) < 1e-11);
}

TEST_CASE("quadrature reproduces continuum inner products") {
  auto basis = make_harmonic_oscillator({1, 5, 12});
  for (auto [i, j] : {std::pair{0, 0}, {2, 2}, {1, 3}, {4, 5}, {0, 4}}) {
    double quad = 0.0;
    for (int q = 0; q < basis.node_count(); ++q)
      quad += basis.weights()(q) * basis.eigenfunctions()(i, q) * basis.eigenfunctions()(j, q);
    const double continuum = testsupport::adaptive_simpson(
        [&](double x) {
          return testsupport::hermite_function_direct(i, x) *
                 testsupport::hermite_function_direct(j, x);
        },
        -12.0, 12.0, 1e-13);
    CHECK(quad == doctest::Approx(continuum).epsilon(5e-12));
  }
}

TEST_CASE("shipped bases stay orthonormal to 1e-10") {
  CHECK(make_harmonic_oscillator({1, 31, 32}).gram_defect() <= 1e-10);
  CHECK(make_harmonic_oscillator({2, 4, 8}).gram_defect() <= 1e-10);
  CHECK(make_torus({1, 8, 32}).gram_defect() <= 1e-10);
  CHECK(make_torus({2, 3, 8}).gram_defect() <= 1e-10);
}

TEST_CASE("degenerate eigenvalues keep a deterministic order") {
  auto basis = make_harmonic_oscillator({2, 2, 4});
  // Eigenvalues 2(k1+k2)+2; ties resolved by the degree vector.
  REQUIRE(basis.mode_count() == 9);
  const std::vector<std::vector<int>> expected = {
      {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {1, 2}, {2, 1}, {2, 2}};
  CHECK(basis.mode_labels() == expected);
  const std::vector<double> lambdas = {2, 4, 4, 6, 6, 6, 8, 8, 10};
  for (int i = 0; i < 9; ++i) CHECK(basis.eigenvalue(i) == lambdas[i]);
}

TEST_CASE("harmonic oscillator spec validation") {
  CHECK_THROWS_AS(make_harmonic_oscillator({0, 3, 8}), Error);
  CHECK_THROWS_AS(make_harmonic_oscillator({1, 0, 8}), Error);
  CHECK_THROWS_AS(make_harmonic_oscillator({1, 501, 600}), Error);
  CHECK_THROWS_AS(make_harmonic_oscillator({1, 8, 6}), Error);  // too few nodes
  try {
    make_harmonic_oscillator({1, 501, 600});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("torus modes carry squared integer frequencies") {
  auto basis = make_torus({1, 2, 0});
  REQUIRE(basis.mode_count() == 5);
  CHECK(basis.node_count() == 5);
  const std::vector<double> lambdas = {0, 1, 1, 4, 4};
  for (int i = 0; i < 5; ++i) CHECK(basis.eigenvalue(i) == lambdas[i]);
  CHECK(basis.bottom() == 0.0);
  // Constant mode value and the cosine mode at x = 0.
  CHECK(basis.eigenfunctions()(0, 0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(basis.eigenfunctions()(1, 0) ==
        doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("torus grid must resolve mode products") {
  CHECK_THROWS_AS(make_torus({1, 4, 8}), Error);   // 8 <= 2*4
  CHECK_NOTHROW(make_torus({1, 4, 9}));
  CHECK_THROWS_AS(make_torus({1, 0, 0}), Error);
}

TEST_CASE("explicit operators are sorted and validated") {
  auto basis = make_explicit(two_mode_toy());
  CHECK(basis.eigenvalue(0) == 1.0);
  CHECK(basis.eigenvalue(1) == 3.0);
  // Row for eigenvalue 1 is the constant-sign one.
  CHECK(basis.eigenfunctions()(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(basis.eigenfunctions()(1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(basis.gram_defect() < 1e-15);
}

TEST_CASE("explicit operator rejection paths") {
  auto spec = two_mode_toy();
  spec.eigenfunction_table(0, 0) += 1e-3;
  try {
    make_explicit(spec);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("Gram") != std::string::npos);
  }

  spec = two_mode_toy();
  spec.eigenvalues(0) = -1.0;
  CHECK_THROWS_AS(make_explicit(spec), Error);

  spec = two_mode_toy();
  spec.weights(1) = 0.0;
  CHECK_THROWS_AS(make_explicit(spec), Error);

  spec = two_mode_toy();
  spec.eigenvalues(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_explicit(spec), Error);
}

TEST_CASE("basis JSON round trip preserves everything bit for bit") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "specwave_basis_roundtrip.json").string();
  auto basis = make_harmonic_oscillator({1, 7, 9});
  save_basis_json(basis, path);
  auto loaded = load_basis_json(path);
  std::remove(path.c_str());

  CHECK(loaded.family() == "hermite");
  CHECK(loaded.dimension() == 1);
  CHECK(loaded.bottom_is_infimum() == basis.bottom_is_infimum());
  REQUIRE(loaded.mode_count() == basis.mode_count());
  REQUIRE(loaded.node_count() == basis.node_count());
  CHECK(loaded.eigenvalues() == basis.eigenvalues());
  CHECK(loaded.weights() == basis.weights());
  CHECK(loaded.nodes() == basis.nodes());
  CHECK(loaded.eigenfunctions() == basis.eigenfunctions());
  CHECK(loaded.mode_labels() == basis.mode_labels());
}

TEST_CASE("basis JSON error paths") {
  CHECK_THROWS_AS(load_basis_json("/nonexistent/specwave.json"), Error);
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "specwave_basis_garbage.json").string();
  {
    FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f);
    std::fputs("{\"format\": \"something-else\"}", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_basis_json(path), Error);
  std::remove(path.c_str());
}
