#include "nhb/dynamics.hpp"

#include "nhb/spectral.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nhb {

TwoModeState rk4_step(const ModelParams& m, const TwoModeState& s, double dt) {
  const TwoModeState k1 = rhs(m, s);
  const TwoModeState k2 = rhs(m, s + (0.5 * dt) * k1);
  const TwoModeState k3 = rhs(m, s + (0.5 * dt) * k2);
  const TwoModeState k4 = rhs(m, s + dt * k3);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const ModelParams& m, const TwoModeState& initial, double dt, double t_end,
                     std::size_t stride) {
  if (!(dt > 0.0) || (m.omega_R > 0.0 && dt > 0.02 / m.omega_R * (1.0 + 1e-12))) {
    throw std::invalid_argument("integrate: need 0 < dt <= 0.02 / omega_R");
  }
  if (!(t_end >= 0.0) || stride == 0) {
    throw std::invalid_argument("integrate: need t_end >= 0 and stride >= 1");
  }

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  Trajectory tr;
  tr.dt = dt;
  tr.stride = stride;
  tr.times.reserve(steps / stride + 1);
  tr.states.reserve(steps / stride + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(initial);

  TwoModeState s = initial;
  for (std::size_t i = 1; i <= steps; ++i) {
    s = rk4_step(m, s, dt);
    const double amp = std::max(std::abs(s.psi_C), std::abs(s.psi_X));
    if (!(amp <= kOverflowGuard)) {
      tr.overflow = true;
      break;
    }
    if (std::abs(m.nonlinearity()) * std::norm(s.psi_X) * dt > kMaxPhasePerStep) {
      tr.unresolved = true;
      break;
    }
    if (i % stride == 0) {
      tr.times.push_back(double(i) * dt);
      tr.states.push_back(s);
    }
  }
  return tr;
}

std::string_view to_string(AsymptoticKind k) {
  switch (k) {
  case AsymptoticKind::Steady: return "Steady";
  case AsymptoticKind::Oscillating: return "Oscillating";
  case AsymptoticKind::Decayed: return "Decayed";
  case AsymptoticKind::Diverged: return "Diverged";
  case AsymptoticKind::Inconclusive: break;
  }
  return "Inconclusive";
}

namespace {

Envelope range_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a;
  return s / double(v.size());
}

} // namespace

AsymptoticVerdict settle(const ModelParams& m, const TwoModeState& initial, double horizon,
                         const SettleOptions& opts) {
  if (m.omega_R > 0.0 && horizon < 500.0 / m.omega_R) {
    throw std::invalid_argument("settle: horizon must be >= 500 / omega_R");
  }
  if (!(opts.transient_fraction >= 0.0 && opts.transient_fraction < 1.0)) {
    throw std::invalid_argument("settle: transient_fraction must lie in [0, 1)");
  }

  const Trajectory tr = integrate(m, initial, opts.dt, horizon, opts.stride);
  AsymptoticVerdict v;
  v.final_state = tr.states.back();
  v.transient_end = opts.transient_fraction * horizon;
  if (tr.overflow) {
    v.kind = AsymptoticKind::Diverged;
    return v;
  }
  if (tr.unresolved) {
    return v;
  }

  std::vector<double> nc2, nx2;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (tr.times[i] >= v.transient_end) {
      nc2.push_back(std::norm(tr.states[i].psi_C));
      nx2.push_back(std::norm(tr.states[i].psi_X));
    }
  }
  if (nc2.size() < 16) {
    return v;
  }
  v.nC2 = range_of(nc2);
  v.nX2 = range_of(nx2);

  if (std::sqrt(v.nC2.max + v.nX2.max) < opts.decay_tol) {
    v.kind = AsymptoticKind::Decayed;
    return v;
  }

  auto rel_var = [](const Envelope& e, double mean) {
    return (e.max - e.min) / std::max(mean, 1e-300);
  };
  if (rel_var(v.nC2, mean_of(nc2)) < opts.steady_tol &&
      rel_var(v.nX2, mean_of(nx2)) < opts.steady_tol) {
    v.kind = AsymptoticKind::Steady;
    return v;
  }

  const double sample_dt = opts.dt * double(opts.stride);
  const SpectralPeak peak = dominant_frequency(nc2, sample_dt);
  v.peak_ratio = peak.peak_to_median;

  const std::size_t half = nc2.size() / 2;
  const Envelope first = range_of(std::span(nc2).first(half));
  const Envelope second = range_of(std::span(nc2).subspan(half));
  const double a1 = first.max - first.min;
  const double a2 = second.max - second.min;
  const double separation = sample_dt * double(half);
  v.envelope_drift = std::abs(a2 - a1) / std::max({a1, a2, 1e-300}) * (100.0 / separation);

  if (peak.peak_to_median >= opts.min_peak_ratio && v.envelope_drift < opts.max_drift &&
      peak.frequency > 0.0) {
    v.kind = AsymptoticKind::Oscillating;
    v.frequency = peak.frequency;
  }
  return v;
}

std::vector<AsymptoticVerdict> settle_ensemble_serial(const ModelParams& m,
                                                      std::span<const TwoModeState> initials,
                                                      double horizon, const SettleOptions& opts) {
  std::vector<AsymptoticVerdict> out;
  out.reserve(initials.size());
  for (const TwoModeState& s : initials) {
    out.push_back(settle(m, s, horizon, opts));
  }
  return out;
}

std::vector<AsymptoticVerdict> settle_ensemble(const ModelParams& m,
                                               std::span<const TwoModeState> initials,
                                               double horizon, const SettleOptions& opts,
                                               int jobs) {
  std::vector<AsymptoticVerdict> out(initials.size());
  const auto n = static_cast<std::int64_t>(initials.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = settle(m, initials[i], horizon, opts);
  }
  return out;
}

TwoModeState random_initial(std::mt19937_64& rng) {
  auto draw = [&rng] {
    const double r = 0.1 + 1.9 * unit_uniform(rng);
    const double phase = 2.0 * std::numbers::pi * unit_uniform(rng);
    return std::polar(r, phase);
  };
  const cplx c = draw();
  const cplx x = draw();
  return {c, x};
}

std::vector<TwoModeState> sample_initials(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<TwoModeState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(random_initial(rng));
  }
  return out;
}

std::optional<StatePair> reference_pair(const std::vector<SteadyState>& states) {
  if (states.empty()) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    const SteadyState& a = states[i];
    const SteadyState& b = states[i + 1];
    if (a.x == b.x && a.branch != b.branch) {
      return a.branch == Branch::Upper ? StatePair{a, b} : StatePair{b, a};
    }
  }
  const auto [lo, hi] = std::minmax_element(
      states.begin(), states.end(),
      [](const SteadyState& a, const SteadyState& b) { return a.energy < b.energy; });
  return StatePair{*hi, *lo};
}

std::optional<SteadyState> top_state(const std::vector<SteadyState>& states) {
  if (states.empty()) {
    return std::nullopt;
  }
  return *std::max_element(states.begin(), states.end(), [](const SteadyState& a, const SteadyState& b) {
    return a.energy < b.energy;
  });
}

TwoModeState blend(const SteadyState& a, const SteadyState& b, double w) {
  return (1.0 - w) * a.state() + w * b.state();
}

double gauge_distance(const TwoModeState& a, const TwoModeState& b) {
  const cplx overlap = std::conj(b.psi_C) * a.psi_C + std::conj(b.psi_X) * a.psi_X;
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  return std::sqrt((a - phase * b).norm2());
}

} // namespace nhb
