#pragma once

// (gamma_C, p) sweeps, lowest-energy stable selection, lasing thresholds and
// the first-order transition line.

#include "nhb/folds.hpp"
#include "nhb/model.hpp"
#include "nhb/stability.hpp"
#include "nhb/steady_state.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace nhb {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;

  double step() const { return points > 1 ? (hi - lo) / double(points - 1) : 0.0; }
  double at(std::size_t i) const { return i + 1 == points ? hi : lo + step() * double(i); }
};

struct GridSpec {
  Axis gamma{0.2, 1.6, 200};
  Axis p{0.05, 2.0, 200};
};

enum class Region { NoLasing, Single, Bistable, OscillatoryCoexistence, UnstableOnly };

std::string_view to_string(Region r);

struct PhaseCell {
  double gamma_C = 0.0;
  double p = 0.0;
  int n_solutions = 0; // steady-state records; a degenerate pair counts twice
  int n_stable = 0;
  int n_marginal = 0;
  int n_failures = 0; // roots or classifications that could not be completed
  std::optional<SteadyState> selected; // lowest Re E among Stable verdicts
  Region region = Region::NoLasing;
};

/// p(gamma_C) on which an Upper/Lower pair coexists at x = delta / g1.
struct RLine {
  double slope = 1.0;
  double intercept = 0.0;
  double gamma_max = 1.0; // the line ends at the exceptional point

  double p_at(double gamma) const { return intercept + slope * gamma; }
};

RLine r_line(const ModelParams& params);

struct CellOptions {
  SteadyTolerances steady{};
  StabilityTolerances stability{};
  /// Cells with |p - p_R(gamma_C)| below this (and gamma_C < omega_R) are
  /// tagged OscillatoryCoexistence. Zero disables the tag.
  double r_line_tol = 0.0;
};

/// Steady states, stability and selection at one (gamma_C, p). Never throws
/// on numerical trouble; failures are counted in the cell.
PhaseCell evaluate_cell(const ModelParams& params, double gamma, double p,
                        const CellOptions& opts = {});

struct PhaseGrid {
  ModelParams params; // gamma_C and p are overridden per cell
  CellOptions opts;
  GridSpec spec;
  std::vector<PhaseCell> cells; // row-major: index = i_p * gamma.points + i_gamma

  const PhaseCell& at(std::size_t i_gamma, std::size_t i_p) const {
    return cells[i_p * spec.gamma.points + i_gamma];
  }
};

/// Default r_line_tol for a grid: half a p step.
CellOptions grid_cell_options(const GridSpec& spec);

/// Reference implementation: cells evaluated one after another.
PhaseGrid sweep_serial(const ModelParams& params, const GridSpec& spec,
                       const CellOptions& opts);

/// OpenMP-parallel over cells; output identical to sweep_serial for any
/// thread count. `jobs` <= 0 uses the OpenMP default.
PhaseGrid sweep(const ModelParams& params, const GridSpec& spec, const CellOptions& opts,
                int jobs = 0);

struct GridPoint {
  double gamma = 0.0;
  double p = 0.0;
};

struct TransitionLine {
  /// Midpoints of cell edges across which the selected energy jumps, plus
  /// folds inside p-edges where the selection jumps on either side of the
  /// fold (a stable sliver narrower than the grid step).
  std::vector<GridPoint> marks;
  /// Longest chain of marks linked through neighbouring cells, ordered by
  /// decreasing gamma_C.
  std::vector<GridPoint> polyline;
  bool reaches_weak_coupling = false; // some polyline point has gamma_C > omega_R
};

TransitionLine transition_line(const PhaseGrid& grid, double jump_tol = 0.05);

/// True if some polyline vertex lies within one grid cell of (gamma, p).
bool passes_near(const TransitionLine& line, const GridSpec& spec, double gamma, double p);

/// Smallest p in [0, p_max] where the vacuum becomes linearly unstable
/// (max Im E at zero density turns positive).
std::optional<double> vacuum_threshold(const ModelParams& params, double gamma, double p_max);

struct Threshold {
  double p = 0.0;
  int solutions_below = 0;
  int solutions_above = 0;
  int stable_below = 0;
  int stable_above = 0;
};

struct ThresholdCut {
  double gamma = 0.0;
  std::optional<double> vacuum;
  /// p values where the solution or stable count changes, refined by
  /// bisection.
  std::vector<Threshold> changes;
};

ThresholdCut thresholds(const ModelParams& params, double gamma, double p_lo, double p_hi,
                        std::size_t samples = 2000, const CellOptions& opts = {});

struct EncircleResult {
  int jumps = 0;
  std::size_t points = 0;
  std::size_t unselected = 0; // loop points with no stable state
};

/// Walks the rectangle (g0,p0) -> (g1,p0) -> (g1,p1) -> (g0,p1) -> (g0,p0)
/// and counts jumps of the selected energy larger than jump_tol, including
/// the step that closes the loop. Points without a stable state are skipped.
EncircleResult encircle(const ModelParams& params, double g0, double g1, double p0, double p1,
                        std::size_t per_side = 200, double jump_tol = 0.05);

struct CriticalPoints {
  EpLocation ep;
  std::optional<EtLocation> et;
  RLine r_line;
  TransitionLine transition;
};

/// Parameters of the reference diagrams: delta = 0.2, g1 = 0.1 and g2 = 0.03
/// (moderate saturation) or g2 = 0.45 (strong saturation).
ModelParams moderate_saturation_params();
ModelParams strong_saturation_params();

} // namespace nhb
