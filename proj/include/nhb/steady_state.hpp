#pragma once

// Nonzero steady states psi(t) = psi_0 exp(-i E t) with real E.
//
// Writing the radicand of the spectrum as 4 Omega^2 + (A + iB)^2 with
//   A = g1 x - delta,  B = p - g2 x + gamma_C,  D = p - g2 x - gamma_C,
// Im E = 0 on branch s = +-1 forces Im sqrt = -s D and Re sqrt = -s A B / D.
// Squaring out the root and multiplying by D^2 leaves
//   A^2 B^2 - D^4 - (4 Omega^2 + A^2 - B^2) D^2 = 0.
// Since B^2 - D^2 = 4 gamma_C (p - g2 x), the quartic terms cancel and this is
// 4 P(x) = 0 with the cubic
//   P(x) = gamma_C (p - g2 x) [A^2 + D^2] - Omega^2 D^2.
// Conversely at a root of P one of the two branches has Im E = 0, and both do
// when D = 0 (the degenerate pair on p = gamma_C + g2 delta / g1).

#include "nhb/model.hpp"
#include "nhb/polynomial.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nhb {

enum class Branch { Upper, Lower };
enum class Stability { Stable, Unstable, Marginal, Unknown };

std::string_view to_string(Branch b);
std::string_view to_string(Stability s);

struct SteadyState {
  double x = 0.0;      // exciton density n_X^2
  double n_X = 0.0;
  double n_C = 0.0;
  double phi_CX = 0.0; // phi_C - phi_X in (-pi, pi]
  double energy = 0.0; // Re E
  Branch branch = Branch::Upper;
  Stability stability = Stability::Unknown;

  /// Gauge-fixed amplitudes (phi_X = 0).
  TwoModeState state() const;
};

struct SteadyTolerances {
  double imag_rel = 1e-9; // |Im E| < imag_rel * max(1, |E|)
  double x_rel = 1e-9;    // roots closer than x_rel * max(1, x) are merged
  double gain = 1e-12;    // admit p - g2 x >= -gain
  double D = 1e-9;        // |p - g2 x - gamma_C| below this checks both branches
  /// A critical point x_c of P with |P(x_c)| below this times the evaluation
  /// scale (both in quad precision) is a double root; it replaces the pair
  /// of nearby roots that rounding splits it into (O(sqrt(eps)) apart, too
  /// far for x_rel).
  double double_root = 1e-28;
};

/// Coefficients of P(x) evaluated in arithmetic type T.
template <class T>
CubicT<T> stationarity_cubic_t(const ModelParams& m) {
  const T gamma = m.gamma_C;
  const T om2 = T(m.omega_R) * T(m.omega_R);
  const T q0 = m.p, q1 = -T(m.g2);
  const T a0 = -(T(m.E_C) - T(m.E_X)), a1 = m.g1;
  const T d0 = T(m.p) - T(m.gamma_C), d1 = -T(m.g2);
  const T s0 = a0 * a0 + d0 * d0;
  const T s1 = T(2) * (a0 * a1 + d0 * d1);
  const T s2 = a1 * a1 + d1 * d1;
  CubicT<T> c;
  c.c[0] = gamma * q0 * s0 - om2 * d0 * d0;
  c.c[1] = gamma * (q0 * s1 + q1 * s0) - T(2) * om2 * d0 * d1;
  c.c[2] = gamma * (q0 * s2 + q1 * s1) - om2 * d1 * d1;
  c.c[3] = gamma * q1 * s2;
  return c;
}

/// Throws DegenerateReduction when g1 = g2 = 0.
Cubic stationarity_cubic(const ModelParams& params);

/// n_C = sqrt(x) sqrt((p - g2 x) / gamma_C). Throws NegativeGain if
/// p - g2 x < 0 and InvalidParams if gamma_C <= 0.
double photon_amplitude(const ModelParams& params, double x);

/// Closed-form relative phase phi_C - phi_X. Throws PhaseIndeterminate when
/// n_C / n_X - n_X / n_C is too close to zero for the quotient to be
/// resolved (the exact 0/0 case and its ill-conditioned neighbourhood).
double relative_phase(const ModelParams& params, double x, double n_C);

/// psi_C / psi_X from the eigenvector of the effective Hamiltonian at
/// density x and real energy E.
cplx eigenvector_ratio(const ModelParams& params, double x, double energy);

/// Right-hand side of the implicit density relation evaluated at real energy
/// E: (E - E_X - i p - Omega^2 / (E - E_C + i gamma_C)) / g. Equals x at a
/// steady state.
cplx density_from_energy(const ModelParams& params, double energy);

struct RootFailure {
  double x = 0.0;
  std::string reason;
};

struct SteadyStateSet {
  std::vector<SteadyState> states; // sorted by x, Upper before Lower
  std::vector<RootFailure> failures;
};

/// All admissible nonzero steady states (0 to 3 densities; a degenerate
/// Upper/Lower pair shares one density). Requires g2 > 0. Stability is left
/// Unknown.
SteadyStateSet solve_steady_states(const ModelParams& params, const SteadyTolerances& tol = {});

/// Rotating-frame residual |rhs(s) + i E s| / max(1, |s|) of the gauge-fixed
/// state.
double steady_residual(const ModelParams& params, const SteadyState& ss);

} // namespace nhb
