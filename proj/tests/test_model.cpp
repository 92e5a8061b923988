#include "doctest.h"
#include "oracles.hpp"

#include "nhb/dynamics.hpp"
#include "nhb/errors.hpp"
#include "nhb/model.hpp"
#include "nhb/phase_diagram.hpp"

#include <cmath>
#include <numbers>
#include <random>

using nhb::cplx;
using nhb::ModelParams;

TEST_CASE("Hermitian resonant limit gives the Rabi splitting") {
  ModelParams m;
  m.E_C = 0.3;
  m.E_X = 0.3;
  m.gamma_C = 0.0;
  m.p = 0.0;
  const auto e = nhb::spectrum(m, 0.0);
  CHECK(e.upper.real() == doctest::Approx(0.3 + 1.0).epsilon(1e-14));
  CHECK(e.lower.real() == doctest::Approx(0.3 - 1.0).epsilon(1e-14));
  CHECK(std::abs(e.upper.imag()) < 1e-15);
  CHECK(std::abs(e.lower.imag()) < 1e-15);
}

TEST_CASE("branches coalesce at the exceptional density") {
  ModelParams m = nhb::moderate_saturation_params();
  m.gamma_C = 1.0;
  m.p = 1.06;
  const auto e = nhb::spectrum(m, 2.0);
  CHECK(std::abs(e.upper - e.lower) < 1e-6);
  // Away from x = 2 the branches are split.
  const auto f = nhb::spectrum(m, 1.5);
  CHECK(std::abs(f.upper - f.lower) > 1e-2);
}

TEST_CASE("spectrum matches the characteristic polynomial on random parameters") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const ModelParams m = oracle::random_params(rng);
    const double x = 3.0 * nhb::unit_uniform(rng);
    const auto e = nhb::spectrum(m, x);
    const auto ref = oracle::eigenvalues(m, x);
    REQUIRE(oracle::pair_distance({e.upper, e.lower}, ref) < 1e-10);

    // Vieta: trace and determinant of the effective Hamiltonian.
    const nhb::Matrix2c h = nhb::hamiltonian(m, x);
    const cplx trace{m.E_C + m.effective_energy(x), m.effective_gain(x) - m.gamma_C};
    CHECK(std::abs(e.upper + e.lower - trace) < 1e-12);
    CHECK(std::abs(e.upper * e.lower - h.det()) < 1e-10 * std::max(1.0, std::abs(h.det())));
  }
}

TEST_CASE("vanishing nonlinearity removes the density dependence") {
  ModelParams m;
  m.g1 = 1e-300;
  m.g2 = 0.0;
  m.p = 0.4;
  const auto a = nhb::spectrum(m, 0.0);
  const auto b = nhb::spectrum(m, 5.0);
  CHECK(std::abs(a.upper - b.upper) < 1e-14);
  CHECK(std::abs(a.lower - b.lower) < 1e-14);
}

TEST_CASE("principal square root convention") {
  CHECK(nhb::principal_sqrt(cplx{4.0, 0.0}) == cplx{2.0, 0.0});
  const cplx r = nhb::principal_sqrt(cplx{-4.0, 0.0});
  CHECK(r.real() == 0.0);
  CHECK(r.imag() == doctest::Approx(2.0));
  const cplx s = nhb::principal_sqrt(cplx{-4.0, -0.0});
  CHECK(s.imag() == doctest::Approx(2.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const cplx z{4.0 * nhb::unit_uniform(rng) - 2.0, 4.0 * nhb::unit_uniform(rng) - 2.0};
    const cplx q = nhb::principal_sqrt(z);
    CHECK(q.real() >= 0.0);
    CHECK(std::abs(q * q - z) < 1e-14);
  }
}

TEST_CASE("equations of motion are U(1) equivariant") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ModelParams m = oracle::random_params(rng);
    const nhb::TwoModeState s = nhb::random_initial(rng);
    const double theta = 2.0 * std::numbers::pi * nhb::unit_uniform(rng);
    const cplx u = std::polar(1.0, theta);
    const nhb::TwoModeState a = nhb::rhs(m, u * s);
    const nhb::TwoModeState b = u * nhb::rhs(m, s);
    CHECK(std::abs(a.psi_C - b.psi_C) < 1e-12);
    CHECK(std::abs(a.psi_X - b.psi_X) < 1e-12);
  }
}

TEST_CASE("without gain the total density never grows") {
  ModelParams m = nhb::moderate_saturation_params();
  m.p = 0.0;
  m.gamma_C = 0.5;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const nhb::TwoModeState s = nhb::random_initial(rng);
    const nhb::TwoModeState d = nhb::rhs(m, s);
    const double rate = 2.0 * (std::conj(s.psi_C) * d.psi_C + std::conj(s.psi_X) * d.psi_X).real();
    const double exact = -2.0 * m.gamma_C * std::norm(s.psi_C) -
                         2.0 * m.g2 * std::norm(s.psi_X) * std::norm(s.psi_X);
    CHECK(rate == doctest::Approx(exact).epsilon(1e-12));
    CHECK(rate <= 0.0);
  }
}

TEST_CASE("parameter validation") {
  ModelParams m;
  CHECK_NOTHROW(nhb::validate(m));
  m.gamma_C = -0.1;
  CHECK_THROWS_AS(nhb::validate(m), nhb::InvalidParams);
  m = ModelParams{};
  m.g1 = 0.0;
  CHECK_THROWS_AS(nhb::validate(m), nhb::InvalidParams);
  m = ModelParams{};
  m.p = std::nan("");
  CHECK_THROWS_AS(nhb::validate(m), nhb::InvalidParams);
  m = ModelParams{};
  m.g2 = 0.0;
  CHECK_NOTHROW(nhb::validate(m));
  CHECK_THROWS_AS(nhb::validate(m, true), nhb::InvalidParams);
}
