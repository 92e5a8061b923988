#pragma once

#include "nhb/model.hpp"
#include "nhb/steady_state.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace nhb {

struct Trajectory {
  std::vector<double> times;
  std::vector<TwoModeState> states;
  double dt = 0.0;
  std::size_t stride = 1;
  /// Integration stopped because max |psi| exceeded the overflow guard.
  bool overflow = false;
  /// Integration stopped because the Kerr rotation |g| |psi_X|^2 per step
  /// exceeded kMaxPhasePerStep; beyond it RK4 damps the field artificially
  /// and can fake a steady state.
  bool unresolved = false;
};

inline constexpr double kOverflowGuard = 1e6;
inline constexpr double kMaxPhasePerStep = 0.25;

/// One classic fourth-order Runge-Kutta step.
TwoModeState rk4_step(const ModelParams& params, const TwoModeState& s, double dt);

/// Fixed-step RK4 from t = 0 to t_end, keeping every `stride`-th state
/// (including t = 0). Requires 0 < dt <= 0.02 / omega_R. On overflow or loss
/// of resolution the partial trajectory is returned with the flag set.
Trajectory integrate(const ModelParams& params, const TwoModeState& initial, double dt,
                     double t_end, std::size_t stride = 1);

enum class AsymptoticKind { Steady, Oscillating, Decayed, Diverged, Inconclusive };

std::string_view to_string(AsymptoticKind k);

struct Envelope {
  double min = 0.0;
  double max = 0.0;
};

struct AsymptoticVerdict {
  AsymptoticKind kind = AsymptoticKind::Inconclusive;
  TwoModeState final_state;
  double frequency = 0.0; // > 0 iff Oscillating
  Envelope nC2;           // tail range of |psi_C|^2
  Envelope nX2;           // tail range of |psi_X|^2
  double transient_end = 0.0;
  double peak_ratio = 0.0;     // spectral peak / median of |psi_C|^2 tail
  double envelope_drift = 0.0; // relative amplitude change per 100 / Omega_R
};

struct SettleOptions {
  double dt = 0.01;
  std::size_t stride = 10;
  double transient_fraction = 0.5;
  double steady_tol = 1e-6;    // relative tail variation for Steady
  double decay_tol = 1e-8;     // tail amplitude bound for Decayed
  double min_peak_ratio = 10.0;
  double max_drift = 0.01;     // per 100 / Omega_R
};

/// Integrates to `horizon` (>= 500 / Omega_R) and classifies the tail after
/// the transient fraction. Inconclusive is returned, not thrown; an
/// unresolved trajectory is Inconclusive.
AsymptoticVerdict settle(const ModelParams& params, const TwoModeState& initial, double horizon,
                         const SettleOptions& opts = {});

/// Reference implementation: one settle() per initial condition, in order.
std::vector<AsymptoticVerdict> settle_ensemble_serial(const ModelParams& params,
                                                      std::span<const TwoModeState> initials,
                                                      double horizon,
                                                      const SettleOptions& opts = {});

/// OpenMP-parallel over initial conditions; identical output to the serial
/// version for any thread count. `jobs` <= 0 uses the OpenMP default.
std::vector<AsymptoticVerdict> settle_ensemble(const ModelParams& params,
                                               std::span<const TwoModeState> initials,
                                               double horizon, const SettleOptions& opts = {},
                                               int jobs = 0);

/// Uniform double in [0, 1) from the top 53 bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

/// Complex amplitudes with |psi| uniform in [0.1, 2] and uniform phases.
TwoModeState random_initial(std::mt19937_64& rng);
std::vector<TwoModeState> sample_initials(std::uint64_t seed, std::size_t count);

struct StatePair {
  SteadyState upper;
  SteadyState lower;
};

/// The coexisting Upper/Lower pair sharing one density if there is one,
/// otherwise the highest- and lowest-energy states. Empty input gives nullopt.
std::optional<StatePair> reference_pair(const std::vector<SteadyState>& states);

/// The highest-energy steady state, if any.
std::optional<SteadyState> top_state(const std::vector<SteadyState>& states);

/// (1 - w) a + w b of the gauge-fixed steady states.
TwoModeState blend(const SteadyState& a, const SteadyState& b, double w);

/// min over theta of |a - exp(i theta) b|.
double gauge_distance(const TwoModeState& a, const TwoModeState& b);

} // namespace nhb
