#pragma once

// Folds (double roots of the stationarity cubic), the exceptional point and
// the endpoint of the bistability window.
//
// Fold detection works on the sign of the discriminant of the monic cubic,
// evaluated in quad precision. On the line p = gamma_C + g2 delta / g1 the
// cubic has a double root at x = delta / g1 for every gamma_C and the
// discriminant touches zero without changing sign; in quad precision the
// touch is invisible to a sampled scan, so sign changes are genuine folds.

#include "nhb/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace nhb {

/// Discriminant of the monic stationarity cubic (quad-precision evaluation,
/// rounded to double). Positive: three distinct real roots.
double stationarity_discriminant(const ModelParams& params);

struct Fold {
  double p = 0.0;
  double x = 0.0; // location of the double root
  bool admissible = false; // x > 0 and p - g2 x >= 0
};

/// Folds along p in [p_lo, p_hi] at fixed gamma_C (overrides params.gamma_C).
std::vector<Fold> folds(const ModelParams& params, double gamma, double p_lo, double p_hi,
                        std::size_t samples = 2000);

struct Window {
  double p_lower = 0.0;
  double p_upper = 0.0;
  double width() const { return p_upper - p_lower; }
};

/// Widest p-interval between two adjacent admissible folds on which the cubic
/// has three real roots.
std::optional<Window> bistable_window(const ModelParams& params, double gamma, double p_lo,
                                      double p_hi, std::size_t samples = 2000);

struct EpLocation {
  double gamma = 0.0;      // = omega_R
  double p_closed = 0.0;   // omega_R + g2 delta / g1
  double p_numeric = 0.0;  // discriminant sign change at gamma = omega_R (NaN if g2 = 0)
  double x_coalesce = 0.0; // double-root density at p_numeric (NaN if g2 = 0)
};

/// Throws NotBlueDetuned if delta <= 0.
EpLocation locate_ep(const ModelParams& params);

struct EtLocation {
  double gamma = 0.0;
  double p = 0.0;
  Window window_at_lo; // bistability window at the lower bracket end
  int iterations = 0;
};

/// Bisection on gamma for the closure of the bistability window: the window
/// exists at gamma_lo and not at gamma_hi (else BracketInvalid). Folds are
/// searched in p in [p_lo, p_hi].
EtLocation locate_et(const ModelParams& params, double gamma_lo, double gamma_hi, double p_lo,
                     double p_hi, double tol = 1e-6);

struct TripleRootSignature {
  double discriminant = 0.0;
  double d_discriminant_dp = 0.0;
  double root_spread = 0.0; // max pairwise distance of the three roots
};

/// Root-multiplicity diagnostic at the given parameters. A triple root makes
/// the discriminant and its p-derivative vanish together.
TripleRootSignature triple_root_signature(const ModelParams& params);

} // namespace nhb
