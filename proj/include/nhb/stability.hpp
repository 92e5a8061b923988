#pragma once

#include "nhb/model.hpp"
#include "nhb/steady_state.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace nhb {

using Matrix4 = Eigen::Matrix4d;

/// Jacobian of the flow for real deviations (Re dpsi_C, Im dpsi_C,
/// Re dpsi_X, Im dpsi_X) around `s`, in the frame rotating at
/// `frame_energy`. The nonlinear term contributes
/// -i g (2 |psi_X|^2 dpsi_X + psi_X^2 conj(dpsi_X)), which is not complex
/// linear, hence the real 4x4 form.
Matrix4 jacobian(const ModelParams& params, const TwoModeState& s, double frame_energy);

Matrix4 jacobian(const ModelParams& params, const SteadyState& ss);

/// Rotating-frame vector field rhs(s) + i E s as four real components.
Eigen::Vector4d rotating_flow(const ModelParams& params, const TwoModeState& s,
                              double frame_energy);

/// Trace of the rotating-frame Jacobian at exciton density x:
/// 2 (p - 2 g2 x - gamma_C), i.e. twice the density-differentiated
/// effective gain d(x P(x))/dx minus the photon loss.
double jacobian_trace(const ModelParams& params, double x);

struct StabilityTolerances {
  double gauge = 1e-7; // |lambda| bound for the U(1) zero mode
  double stab = 1e-7;  // |margin| below this is Marginal
};

struct StabilityReport {
  std::array<cplx, 4> eigenvalues{};
  int gauge_index = -1;
  Stability verdict = Stability::Marginal;
  /// Largest real part among the three non-gauge eigenvalues.
  double margin = 0.0;
  /// No eigenvalue was small enough to be the gauge mode; verdict is forced
  /// to Marginal. Indicates an inaccurate steady state upstream.
  bool gauge_missing = false;
};

StabilityReport classify(const ModelParams& params, const SteadyState& ss,
                         const StabilityTolerances& tol = {});

/// Classifies every state in place.
void classify_all(const ModelParams& params, std::vector<SteadyState>& states,
                  const StabilityTolerances& tol = {});

} // namespace nhb
