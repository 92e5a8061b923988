#include "nhb/steady_state.hpp"

#include "nhb/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace nhb {

namespace {
constexpr cplx I{0.0, 1.0};
// Below this |r - 1/r| the first term of the phase formula loses more than
// ~1e-12 relative accuracy.
constexpr double kPhaseConditioning = 1e-4;

using quad = boost::multiprecision::cpp_bin_float_quad;

/// Newton iteration on f / f' in quad precision from x0; returns x0 if the
/// iterate drifts further than `drift` (a start on the wrong side of a close
/// pair).
template <class F, class G>
quad polish(F f, G df, const quad& x0, const quad& drift) {
  quad x = x0;
  for (int k = 0; k < 16; ++k) {
    const quad d = df(x);
    if (d == 0) {
      break;
    }
    const quad step = f(x) / d;
    x -= step;
    if (abs(step) <= quad(1e-30) * (quad(1) + abs(x))) {
      break;
    }
  }
  return abs(x - x0) <= drift ? x : x0;
}
} // namespace

std::string_view to_string(Branch b) { return b == Branch::Upper ? "Upper" : "Lower"; }

std::string_view to_string(Stability s) {
  switch (s) {
  case Stability::Stable: return "Stable";
  case Stability::Unstable: return "Unstable";
  case Stability::Marginal: return "Marginal";
  case Stability::Unknown: break;
  }
  return "Unknown";
}

TwoModeState SteadyState::state() const { return {std::polar(n_C, phi_CX), cplx{n_X, 0.0}}; }

Cubic stationarity_cubic(const ModelParams& m) {
  if (m.g1 == 0.0 && m.g2 == 0.0) {
    throw DegenerateReduction("stationarity cubic degenerates for g1 = g2 = 0");
  }
  return stationarity_cubic_t<double>(m);
}

double photon_amplitude(const ModelParams& m, double x) {
  if (!(m.gamma_C > 0.0)) {
    throw InvalidParams("photon_amplitude requires gamma_C > 0");
  }
  const double gain = m.effective_gain(x);
  if (gain < 0.0) {
    throw NegativeGain(fmt::format("p - g2 x = {} < 0 at x = {}", gain, x));
  }
  return std::sqrt(x) * std::sqrt(gain / m.gamma_C);
}

double relative_phase(const ModelParams& m, double x, double n_C) {
  const double n_X = std::sqrt(x);
  const double r = n_C / n_X;
  const double asym = r - 1.0 / r;
  if (!(std::abs(asym) >= kPhaseConditioning)) {
    throw PhaseIndeterminate(fmt::format("n_C/n_X = {} too close to 1", r));
  }
  const double cos_part = (m.delta() - m.g1 * x) / (m.omega_R * asym);
  const double sin_part = -m.gamma_C * r / m.omega_R;
  return std::arg(cplx{cos_part, sin_part});
}

cplx eigenvector_ratio(const ModelParams& m, double x, double energy) {
  // First row: (E_C - i gamma - E) psi_C + Omega psi_X = 0.
  // Second row: Omega psi_C + (E_X + g1 x + i(p - g2 x) - E) psi_X = 0.
  const cplx den = cplx{energy - m.E_C, m.gamma_C};
  const cplx num2 = cplx{energy - m.effective_energy(x), -m.effective_gain(x)};
  if (std::abs(den) >= std::abs(num2)) {
    return m.omega_R / den;
  }
  return num2 / m.omega_R;
}

cplx density_from_energy(const ModelParams& m, double energy) {
  const cplx bracket = energy - m.E_X - I * m.p -
                       m.omega_R * m.omega_R / cplx{energy - m.E_C, m.gamma_C};
  return bracket / m.nonlinearity();
}

SteadyStateSet solve_steady_states(const ModelParams& m, const SteadyTolerances& tol) {
  validate(m, true);
  SteadyStateSet out;
  const Cubic cubic = stationarity_cubic(m);

  // Rounding the coefficients of P to double moves two close roots by
  // O(sqrt(eps)), enough for the imaginary-energy check to reject them, so
  // roots are refined on the quad-precision cubic. Close pairs are rebuilt
  // around the critical point of P between them, where Newton from the
  // double roots is unreliable.
  const CubicT<quad> exact = stationarity_cubic_t<quad>(m);
  auto value = [&](const quad& x) { return exact(x); };
  auto slope_of = [&](const quad& x) { return exact.derivative(x); };
  auto curvature = [&](const quad& x) { return quad(6) * exact.c[3] * x + quad(2) * exact.c[2]; };
  auto scale = [](double x) { return 1e-6 * std::max(1.0, std::abs(x)); };

  std::vector<double> roots = real_roots(cubic);
  for (double& x : roots) {
    x = static_cast<double>(polish(value, slope_of, quad(x), quad(scale(x))));
  }
  const Cubic slope{{cubic.c[1], 2.0 * cubic.c[2], 3.0 * cubic.c[3], 0.0}};
  for (double guess : real_roots(slope)) {
    const quad xc = polish(slope_of, curvature, quad(guess), quad(100.0 * scale(guess)));
    const double radius = scale(static_cast<double>(xc));
    const quad v = exact(xc);
    const quad c2 = curvature(xc);
    const bool is_double = abs(v) <= quad(tol.double_root) * exact.magnitude(xc);
    // Squared half-distance of the local root pair from the quadratic model.
    const quad h2 = c2 == 0 ? quad(-1) : quad(-2) * v / c2;
    if (!is_double && (c2 == 0 || h2 > quad(radius) * quad(radius))) {
      continue; // no close pair here; the refined roots stand
    }
    std::erase_if(roots, [&](double x) { return std::abs(x - static_cast<double>(xc)) <= radius; });
    if (is_double) {
      roots.push_back(static_cast<double>(xc));
    } else if (h2 > 0) {
      const quad h = sqrt(h2);
      roots.push_back(static_cast<double>(polish(value, slope_of, xc - h, h)));
      roots.push_back(static_cast<double>(polish(value, slope_of, xc + h, h)));
    }
  }
  std::sort(roots.begin(), roots.end());

  std::vector<double> xs;
  for (double x : roots) {
    if (!(x > 0.0) || m.effective_gain(x) < -tol.gain) {
      continue;
    }
    if (!xs.empty() && std::abs(x - xs.back()) <= tol.x_rel * std::max(1.0, x)) {
      continue;
    }
    xs.push_back(x);
  }

  auto build = [&](double x, Branch branch, double energy) {
    SteadyState ss;
    ss.x = x;
    ss.n_X = std::sqrt(x);
    ss.energy = energy;
    ss.branch = branch;
    if (m.gamma_C > 0.0) {
      ModelParams clamped = m;
      clamped.p = std::max(m.p, m.g2 * x); // absorbs the -tol.gain slack
      ss.n_C = photon_amplitude(clamped, x);
    } else {
      ss.n_C = ss.n_X * std::abs(eigenvector_ratio(m, x, energy));
    }
    try {
      ss.phi_CX = relative_phase(m, x, ss.n_C);
    } catch (const PhaseIndeterminate&) {
      ss.phi_CX = std::arg(eigenvector_ratio(m, x, energy));
    }
    out.states.push_back(ss);
  };

  for (double x : xs) {
    const SpectrumPair e = spectrum(m, x);
    const double tol_u = tol.imag_rel * std::max(1.0, std::abs(e.upper));
    const double tol_l = tol.imag_rel * std::max(1.0, std::abs(e.lower));
    const bool up_ok = std::abs(e.upper.imag()) < tol_u;
    const bool lo_ok = std::abs(e.lower.imag()) < tol_l;
    const double D = m.effective_gain(x) - m.gamma_C;

    if (std::abs(D) < tol.D) {
      if (up_ok) build(x, Branch::Upper, e.upper.real());
      if (lo_ok) build(x, Branch::Lower, e.lower.real());
      if (!up_ok && !lo_ok) {
        out.failures.push_back({x, "no branch with Im E = 0 at degenerate root"});
      }
      continue;
    }
    const bool prefer_upper = std::abs(e.upper.imag()) <= std::abs(e.lower.imag());
    if (prefer_upper && up_ok) {
      build(x, Branch::Upper, e.upper.real());
    } else if (!prefer_upper && lo_ok) {
      build(x, Branch::Lower, e.lower.real());
    } else {
      out.failures.push_back(
          {x, fmt::format("root not converged: min |Im E| = {:.3e}",
                          std::min(std::abs(e.upper.imag()), std::abs(e.lower.imag())))});
    }
  }
  return out;
}

double steady_residual(const ModelParams& m, const SteadyState& ss) {
  const TwoModeState s = ss.state();
  const TwoModeState r = rhs(m, s) + (I * ss.energy) * s;
  return std::sqrt(r.norm2()) / std::max(1.0, std::sqrt(s.norm2()));
}

} // namespace nhb
