#pragma once

// Run configuration: an INI file with one section per concern. Keys mirror
// the field names below; unknown sections or keys are rejected.
//
//   [model]  E_C E_X omega_R gamma_C p g1 g2
//   [run]    seed
//   [spectrum] x_min x_max points
//   [sweep]  gamma_min gamma_max gamma_points p_min p_max p_points jump_tol
//   [cut]    gamma p_min p_max samples
//   [evolve] start psi_C_re psi_C_im psi_X_re psi_X_im mix dt t_end stride
//            transient_fraction
//   [locate] et_gamma_min et_gamma_max p_min p_max tol

#include "nhb/model.hpp"
#include "nhb/phase_diagram.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace nhb {

struct SpectrumSpec {
  double x_min = 0.0;
  double x_max = 4.0;
  std::size_t points = 401;
};

struct SweepSpec {
  GridSpec grid{};
  double jump_tol = 0.05;
};

struct CutSpec {
  double gamma = 1.0;
  double p_min = 0.05;
  double p_max = 2.0;
  std::size_t samples = 2000;
};

struct EvolveSpec {
  /// random | explicit | pair | top. `pair` blends the coexisting
  /// Upper/Lower pair (or, without one, the highest- and lowest-energy
  /// states) as (1 - mix) U + mix L; `top` blends the highest-energy state
  /// with the same L.
  std::string start = "random";
  double psi_C_re = 1.0;
  double psi_C_im = 0.0;
  double psi_X_re = 0.0;
  double psi_X_im = 0.0;
  double mix = 0.5;
  double dt = 0.01;
  double t_end = 1000.0;
  std::size_t stride = 10;
  double transient_fraction = 0.5;
};

struct LocateSpec {
  double et_gamma_min = 1.0;
  double et_gamma_max = 2.0;
  double p_min = 0.05;
  double p_max = 3.0;
  double tol = 1e-6;
};

struct RunConfig {
  ModelParams model{};
  std::uint64_t seed = 1;
  SpectrumSpec spectrum{};
  SweepSpec sweep{};
  CutSpec cut{};
  EvolveSpec evolve{};
  LocateSpec locate{};
};

/// Parses INI text on top of the defaults. Throws ConfigError on syntax
/// errors, unknown keys or unparsable values.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::string& path);

/// Applies one "section.key=value" override.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Checks physical and numerical invariants; throws ConfigError.
void validate(const RunConfig& cfg);

/// Full configuration as INI text; parse_config_text(emit_config(c))
/// reproduces c exactly (doubles are written in shortest round-trip form).
std::string emit_config(const RunConfig& cfg);

/// emit_config with every line prefixed by "# ".
std::string config_header(const RunConfig& cfg);

/// Reads the leading "# " lines of an output file back into a RunConfig.
/// Comment lines that are neither section headers nor assignments (command
/// and status lines) are skipped.
RunConfig parse_header(std::istream& in);

} // namespace nhb
