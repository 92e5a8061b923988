#include "nhb/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhb {

namespace {

constexpr cplx I{0.0, 1.0};

// Real 2x2 block of z -> w z.
Eigen::Matrix2d linear_block(cplx w) {
  Eigen::Matrix2d b;
  b << w.real(), -w.imag(), w.imag(), w.real();
  return b;
}

// Real 2x2 block of z -> u conj(z).
Eigen::Matrix2d conjugate_block(cplx u) {
  Eigen::Matrix2d b;
  b << u.real(), u.imag(), u.imag(), -u.real();
  return b;
}

} // namespace

Matrix4 jacobian(const ModelParams& m, const TwoModeState& s, double frame_energy) {
  const cplx g = m.nonlinearity();
  const double nx2 = std::norm(s.psi_X);
  Matrix4 J;
  J.block<2, 2>(0, 0) = linear_block(-I * cplx{m.E_C - frame_energy, -m.gamma_C});
  J.block<2, 2>(0, 2) = linear_block(-I * m.omega_R);
  J.block<2, 2>(2, 0) = linear_block(-I * m.omega_R);
  J.block<2, 2>(2, 2) =
      linear_block(-I * (cplx{m.E_X - frame_energy, m.p} + 2.0 * g * nx2)) +
      conjugate_block(-I * g * s.psi_X * s.psi_X);
  return J;
}

Matrix4 jacobian(const ModelParams& m, const SteadyState& ss) {
  return jacobian(m, ss.state(), ss.energy);
}

Eigen::Vector4d rotating_flow(const ModelParams& m, const TwoModeState& s, double frame_energy) {
  const TwoModeState f = rhs(m, s) + (I * frame_energy) * s;
  return {f.psi_C.real(), f.psi_C.imag(), f.psi_X.real(), f.psi_X.imag()};
}

double jacobian_trace(const ModelParams& m, double x) {
  return 2.0 * (m.p - 2.0 * m.g2 * x - m.gamma_C);
}

StabilityReport classify(const ModelParams& m, const SteadyState& ss,
                         const StabilityTolerances& tol) {
  StabilityReport rep;
  Eigen::EigenSolver<Matrix4> solver(jacobian(m, ss), false);
  const auto& ev = solver.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    rep.eigenvalues[i] = ev(i);
  }

  int gauge = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(rep.eigenvalues[i]) < std::abs(rep.eigenvalues[gauge])) {
      gauge = i;
    }
  }
  rep.gauge_index = gauge;
  rep.margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    if (i != gauge) {
      rep.margin = std::max(rep.margin, rep.eigenvalues[i].real());
    }
  }

  if (!(std::abs(rep.eigenvalues[gauge]) < tol.gauge)) {
    rep.gauge_missing = true;
    rep.verdict = Stability::Marginal;
  } else if (rep.margin < -tol.stab) {
    rep.verdict = Stability::Stable;
  } else if (rep.margin > tol.stab) {
    rep.verdict = Stability::Unstable;
  } else {
    rep.verdict = Stability::Marginal;
  }
  return rep;
}

void classify_all(const ModelParams& m, std::vector<SteadyState>& states,
                  const StabilityTolerances& tol) {
  for (SteadyState& ss : states) {
    ss.stability = classify(m, ss, tol).verdict;
  }
}

} // namespace nhb
