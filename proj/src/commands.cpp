#include "nhb/commands.hpp"

#include "nhb/dynamics.hpp"
#include "nhb/errors.hpp"
#include "nhb/folds.hpp"
#include "nhb/output.hpp"
#include "nhb/phase_diagram.hpp"
#include "nhb/stability.hpp"
#include "nhb/steady_state.hpp"

#include <fmt/format.h>

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nhb {

namespace {

std::string stem_of(const std::string& out) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e(ext);
    if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0) {
      return out.substr(0, out.size() - e.size());
    }
  }
  return out;
}

class Emitter {
public:
  Emitter(std::string_view command, const RunConfig& cfg, std::string stem)
      : command_(command), cfg_(cfg), stem_(std::move(stem)) {}

  /// CSV with the config header; `status` lines follow the header.
  void csv(const std::string& body, const std::vector<std::string>& status = {}) {
    std::string text = fmt::format("# nhb {}\n", command_) + config_header(cfg_);
    for (const std::string& s : status) {
      text += "# status: " + s + "\n";
    }
    write(stem_ + ".csv", text + body);
  }

  void json(const std::string& body) { write(stem_ + ".json", body); }

  CommandResult result;

private:
  void write(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw ConfigError(fmt::format("cannot open output file '{}'", path));
    }
    f << text;
    result.files.push_back(path);
  }

  std::string command_;
  const RunConfig& cfg_;
  std::string stem_;
};

void require_saturation(const ModelParams& m) {
  try {
    validate(m, true);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
}

void fail(CommandResult& r, std::string message) {
  r.exit_code = kExitNumerical;
  r.message = std::move(message);
}

void cmd_spectrum(const RunConfig& cfg, Emitter& out) {
  std::ostringstream body;
  write_spectrum_csv(body, cfg.model, cfg.spectrum);
  out.csv(body.str());
}

std::vector<std::string> failure_lines(const SteadyStateSet& set) {
  std::vector<std::string> lines;
  for (const RootFailure& f : set.failures) {
    lines.push_back(fmt::format("partial, root x = {} dropped: {}", f.x, f.reason));
  }
  return lines;
}

void cmd_steady(const RunConfig& cfg, Emitter& out) {
  require_saturation(cfg.model);
  const SteadyStateSet set = solve_steady_states(cfg.model);
  std::ostringstream body;
  write_steady_csv(body, cfg.model, set.states);
  out.csv(body.str(), failure_lines(set));
  if (!set.failures.empty()) {
    fail(out.result, fmt::format("{} root(s) could not be resolved", set.failures.size()));
  }
}

void cmd_stability(const RunConfig& cfg, Emitter& out) {
  require_saturation(cfg.model);
  SteadyStateSet set = solve_steady_states(cfg.model);
  std::vector<StabilityReport> reports;
  for (SteadyState& s : set.states) {
    reports.push_back(classify(cfg.model, s));
    s.stability = reports.back().verdict;
  }
  std::vector<std::string> status = failure_lines(set);
  int missing = 0;
  for (const StabilityReport& r : reports) {
    missing += r.gauge_missing ? 1 : 0;
  }
  if (missing > 0) {
    status.push_back(fmt::format("partial, {} state(s) without a gauge zero mode", missing));
  }
  std::ostringstream body;
  write_stability_csv(body, set.states, reports);
  out.csv(body.str(), status);
  if (!status.empty()) {
    fail(out.result, "some steady states could not be classified reliably");
  }
}

TwoModeState initial_state(const RunConfig& cfg) {
  const EvolveSpec& e = cfg.evolve;
  if (e.start == "random") {
    return sample_initials(cfg.seed, 1).front();
  }
  if (e.start == "explicit") {
    return {{e.psi_C_re, e.psi_C_im}, {e.psi_X_re, e.psi_X_im}};
  }
  require_saturation(cfg.model);
  const std::vector<SteadyState> states = solve_steady_states(cfg.model).states;
  const auto pair = reference_pair(states);
  if (!pair) {
    throw ConfigError(fmt::format("evolve: start '{}' needs a steady state, none exists", e.start));
  }
  const SteadyState& first = e.start == "top" ? *top_state(states) : pair->upper;
  return blend(first, pair->lower, e.mix);
}

void cmd_evolve(const RunConfig& cfg, Emitter& out) {
  const EvolveSpec& e = cfg.evolve;
  const TwoModeState s0 = initial_state(cfg);
  const Trajectory tr = integrate(cfg.model, s0, e.dt, e.t_end, e.stride);
  std::ostringstream body;
  write_trajectory_csv(body, tr);
  std::vector<std::string> status;
  if (tr.overflow) {
    status.push_back(fmt::format("diverged, amplitude exceeded {} at t = {}", kOverflowGuard,
                                 tr.times.back()));
  }
  if (tr.unresolved) {
    status.push_back(fmt::format("unresolved, Kerr rotation per step exceeded {} at t = {}",
                                 kMaxPhasePerStep, tr.times.back()));
  }
  out.csv(body.str(), status);
  if (cfg.model.omega_R > 0.0 && e.t_end < 500.0 / cfg.model.omega_R) {
    return; // too short to classify the tail
  }
  SettleOptions opts;
  opts.dt = e.dt;
  opts.stride = e.stride;
  opts.transient_fraction = e.transient_fraction;
  out.json(verdict_json(settle(cfg.model, s0, e.t_end, opts), cfg));
}

void cmd_sweep(const RunConfig& cfg, Emitter& out, int jobs) {
  require_saturation(cfg.model);
  const GridSpec& spec = cfg.sweep.grid;
  const PhaseGrid grid = sweep(cfg.model, spec, grid_cell_options(spec), jobs);

  CriticalPoints cp;
  cp.r_line = r_line(cfg.model);
  cp.transition = transition_line(grid, cfg.sweep.jump_tol);
  try {
    cp.ep = locate_ep(cfg.model);
  } catch (const NotBlueDetuned&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    cp.ep = {nan, nan, nan, nan};
  }
  const LocateSpec& l = cfg.locate;
  try {
    cp.et = locate_et(cfg.model, l.et_gamma_min, l.et_gamma_max, l.p_min, l.p_max, l.tol);
  } catch (const BracketInvalid&) {
    cp.et.reset();
  }

  int failed = 0;
  for (const PhaseCell& c : grid.cells) {
    failed += c.n_failures > 0 ? 1 : 0;
  }
  std::vector<std::string> status;
  if (failed > 0) {
    status.push_back(fmt::format("partial, {} cell(s) with solver failures", failed));
  }
  std::ostringstream body;
  write_grid_csv(body, grid);
  out.csv(body.str(), status);
  out.json(critical_points_json(cp, cfg));
  if (failed > 0) {
    fail(out.result, status.front());
  }
}

nlohmann::ordered_json signature_json(const ModelParams& m, double gamma, double p) {
  ModelParams at = m;
  at.gamma_C = gamma;
  at.p = p;
  const TripleRootSignature sig = triple_root_signature(at);
  return {{"at", {gamma, p}},
          {"discriminant", sig.discriminant},
          {"d_discriminant_dp", sig.d_discriminant_dp},
          {"root_spread", sig.root_spread}};
}

void cmd_locate(const RunConfig& cfg, Emitter& out) {
  require_saturation(cfg.model);
  nlohmann::ordered_json j;
  const EpLocation ep = locate_ep(cfg.model);
  j["ep"] = {ep.gamma, ep.p_closed};
  j["ep_numeric"] = {{"p", ep.p_numeric}, {"x", ep.x_coalesce}};
  j["r_line"] = {{"slope", 1.0}, {"intercept", r_line(cfg.model).intercept}};
  j["triple_root_at_ep"] = signature_json(cfg.model, ep.gamma, ep.p_closed);
  const LocateSpec& l = cfg.locate;
  try {
    const EtLocation et = locate_et(cfg.model, l.et_gamma_min, l.et_gamma_max, l.p_min, l.p_max, l.tol);
    j["et"] = {et.gamma, et.p};
    j["et_minus_ep"] = {et.gamma - ep.gamma, et.p - ep.p_closed};
    j["triple_root_at_et"] = signature_json(cfg.model, et.gamma, et.p);
    j["status"] = "ok";
  } catch (const BracketInvalid& e) {
    j["et"] = nullptr;
    j["status"] = std::string("partial: ") + e.what();
    fail(out.result, e.what());
  }
  j["_config"] = emit_config(cfg);
  out.json(j.dump(2) + "\n");
}

void cmd_thresholds(const RunConfig& cfg, Emitter& out) {
  require_saturation(cfg.model);
  const CutSpec& c = cfg.cut;
  const ThresholdCut cut = thresholds(cfg.model, c.gamma, c.p_min, c.p_max, c.samples);
  std::ostringstream body;
  write_thresholds_csv(body, cut);
  out.csv(body.str());
}

} // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "steady", "stability", "evolve",
                                                 "sweep",    "locate", "thresholds"};
  return names;
}

CommandResult run_command(std::string_view name, const RunConfig& cfg, const std::string& out,
                          int jobs) {
  validate(cfg);
  Emitter emitter(name, cfg, stem_of(out));
  try {
    if (name == "spectrum") cmd_spectrum(cfg, emitter);
    else if (name == "steady") cmd_steady(cfg, emitter);
    else if (name == "stability") cmd_stability(cfg, emitter);
    else if (name == "evolve") cmd_evolve(cfg, emitter);
    else if (name == "sweep") cmd_sweep(cfg, emitter, jobs);
    else if (name == "locate") cmd_locate(cfg, emitter);
    else if (name == "thresholds") cmd_thresholds(cfg, emitter);
    else throw ConfigError(fmt::format("unknown command '{}'", name));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(emitter.result, e.what());
  }
  return emitter.result;
}

} // namespace nhb
