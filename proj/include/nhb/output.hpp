#pragma once

// Plain-text writers. CSV rows use shortest round-trip number formatting;
// absent values are empty fields.

#include "nhb/config.hpp"
#include "nhb/dynamics.hpp"
#include "nhb/phase_diagram.hpp"
#include "nhb/stability.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nhb {

/// x, ReE_U, ImE_U, ReE_L, ImE_L on `spec.points` densities.
void write_spectrum_csv(std::ostream& out, const ModelParams& params, const SpectrumSpec& spec);

void write_steady_csv(std::ostream& out, const ModelParams& params,
                      const std::vector<SteadyState>& states);

void write_stability_csv(std::ostream& out, const std::vector<SteadyState>& states,
                         const std::vector<StabilityReport>& reports);

/// t, re_psiC, im_psiC, re_psiX, im_psiX, nC2, nX2.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// One row per cell in row-major order (p outer, gamma_C inner).
void write_grid_csv(std::ostream& out, const PhaseGrid& grid);

void write_thresholds_csv(std::ostream& out, const ThresholdCut& cut);

/// {"ep":[g,p],"et":[g,p]|null,"r_line":{...},"transition":[[g,p],...], ...}
/// with the emitting configuration under "_config".
std::string critical_points_json(const CriticalPoints& cp, const RunConfig& cfg);

std::string verdict_json(const AsymptoticVerdict& v, const RunConfig& cfg);

} // namespace nhb
