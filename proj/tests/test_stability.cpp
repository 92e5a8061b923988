#include "doctest.h"
#include "oracles.hpp"

#include "nhb/phase_diagram.hpp"
#include "nhb/stability.hpp"
#include "nhb/steady_state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using nhb::ModelParams;
using nhb::Stability;

namespace {

ModelParams reference(double gamma, double p) {
  ModelParams m = nhb::moderate_saturation_params();
  m.gamma_C = gamma;
  m.p = p;
  return m;
}

std::vector<nhb::cplx> sorted_eigenvalues(const Eigen::Matrix4d& J) {
  const Eigen::Vector4cd ev = J.eigenvalues();
  std::vector<nhb::cplx> v(ev.data(), ev.data() + 4);
  std::sort(v.begin(), v.end(), [](nhb::cplx a, nhb::cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

nhb::SteadyState lowest(const std::vector<nhb::SteadyState>& states) {
  return *std::min_element(states.begin(), states.end(),
                           [](const auto& a, const auto& b) { return a.energy < b.energy; });
}

} // namespace

TEST_CASE("analytic Jacobian matches central differences") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const ModelParams m = oracle::random_params(rng);
    for (const auto& s : nhb::solve_steady_states(m).states) {
      const Eigen::Matrix4d J = nhb::jacobian(m, s);
      const Eigen::Matrix4d F = oracle::fd_jacobian(m, s.state(), s.energy);
      CHECK((J - F).cwiseAbs().maxCoeff() < 1e-6);
      ++checked;
    }
    // Also off the steady-state manifold.
    const nhb::TwoModeState s = nhb::random_initial(rng);
    const double E = nhb::unit_uniform(rng);
    CHECK((nhb::jacobian(m, s, E) - oracle::fd_jacobian(m, s, E)).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK(checked > 100);
}

TEST_CASE("every steady state carries the gauge zero mode") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 300; ++i) {
    const ModelParams m = oracle::random_params(rng);
    for (const auto& s : nhb::solve_steady_states(m).states) {
      const nhb::StabilityReport r = nhb::classify(m, s);
      REQUIRE(r.gauge_index >= 0);
      CHECK(!r.gauge_missing);
      CHECK(std::abs(r.eigenvalues[std::size_t(r.gauge_index)]) < 1e-7);
    }
  }
}

TEST_CASE("at the vacuum the Jacobian reproduces the linear spectrum") {
  const ModelParams m = reference(0.8, 0.5);
  const Eigen::Matrix4d J = nhb::jacobian(m, nhb::TwoModeState{}, 0.0);
  const auto e = nhb::spectrum(m, 0.0);
  const nhb::cplx I{0.0, 1.0};
  std::vector<nhb::cplx> expected = {-I * e.upper, -I * e.lower, std::conj(-I * e.upper),
                                     std::conj(-I * e.lower)};
  std::sort(expected.begin(), expected.end(), [](nhb::cplx a, nhb::cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const auto got = sorted_eigenvalues(J);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(got[k] - expected[k]) < 1e-12);
  }
}

TEST_CASE("trace identity and conjugate pairing") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 200; ++i) {
    const ModelParams m = oracle::random_params(rng);
    for (const auto& s : nhb::solve_steady_states(m).states) {
      const Eigen::Matrix4d J = nhb::jacobian(m, s);
      CHECK(J.trace() == doctest::Approx(nhb::jacobian_trace(m, s.x)).epsilon(1e-12));
      CHECK(J.trace() ==
            doctest::Approx(2.0 * (m.p - 2.0 * m.g2 * s.x - m.gamma_C)).epsilon(1e-12));
      const nhb::StabilityReport r = nhb::classify(m, s);
      for (const nhb::cplx l : r.eigenvalues) {
        const bool paired = std::any_of(r.eigenvalues.begin(), r.eigenvalues.end(),
                                        [&](nhb::cplx k) { return std::abs(k - std::conj(l)) < 1e-8; });
        CHECK(paired);
      }
    }
  }
}

TEST_CASE("spectrum of the linearisation is gauge covariant") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 100; ++i) {
    const ModelParams m = oracle::random_params(rng);
    for (const auto& s : nhb::solve_steady_states(m).states) {
      const double theta = 2.0 * std::numbers::pi * nhb::unit_uniform(rng);
      const auto a = sorted_eigenvalues(nhb::jacobian(m, s.state(), s.energy));
      const auto b = sorted_eigenvalues(nhb::jacobian(m, std::polar(1.0, theta) * s.state(), s.energy));
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(a[k] - b[k]) < 1e-9);
      }
    }
  }
}

TEST_CASE("bistable strong-coupling cut: outer branches stable, middle unstable") {
  const ModelParams m = reference(1.0, 0.9);
  auto states = nhb::solve_steady_states(m).states;
  REQUIRE(states.size() == 3);
  nhb::classify_all(m, states);
  std::sort(states.begin(), states.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  CHECK(states[1].stability == Stability::Unstable);
  CHECK(states[2].stability == Stability::Stable);
  // The lowest-density state here sits inside the Hopf interval of the
  // lower branch (see next case); below it, it is stable.
  const ModelParams below = reference(1.0, 0.8);
  auto s2 = nhb::solve_steady_states(below).states;
  REQUIRE(s2.size() == 3);
  nhb::classify_all(below, s2);
  std::sort(s2.begin(), s2.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  CHECK(s2[0].stability == Stability::Stable);
  CHECK(s2[1].stability == Stability::Unstable);
  CHECK(s2[2].stability == Stability::Stable);
}

TEST_CASE("below strong coupling the lowest-energy state loses stability on an interval") {
  auto verdict = [](double p) {
    const ModelParams m = reference(0.9, p);
    return nhb::classify(m, lowest(nhb::solve_steady_states(m).states)).verdict;
  };
  CHECK(verdict(0.75) == Stability::Stable);
  CHECK(verdict(1.0) == Stability::Unstable);
  CHECK(verdict(1.3) == Stability::Stable);
}

TEST_CASE("Jacobian verdicts agree with perturbed integration") {
  std::mt19937_64 rng(59);
  std::mt19937_64 kick(61);
  int agree = 0, total = 0;
  while (total < 40) {
    const ModelParams m = oracle::random_params(rng);
    const auto states = nhb::solve_steady_states(m).states;
    if (states.empty()) continue;
    const auto& s = states[std::size_t(nhb::unit_uniform(rng) * double(states.size()))];
    const nhb::StabilityReport r = nhb::classify(m, s);
    if (r.verdict == Stability::Marginal) continue;
    const oracle::Outcome o = oracle::perturb_and_integrate(m, s, kick);
    ++total;
    agree += (r.verdict == Stability::Stable) == (o == oracle::Outcome::Returned) ? 1 : 0;
  }
  CHECK(agree >= 36);
}
