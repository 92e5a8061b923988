#include "nhb/output.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"

#include <ostream>

namespace nhb {

namespace {

std::string num(double v) { return fmt::format("{}", v); }

nlohmann::ordered_json point(double g, double p) { return nlohmann::ordered_json::array({g, p}); }

} // namespace

void write_spectrum_csv(std::ostream& out, const ModelParams& m, const SpectrumSpec& spec) {
  out << "x,ReE_U,ImE_U,ReE_L,ImE_L\n";
  const Axis axis{spec.x_min, spec.x_max, spec.points};
  for (std::size_t i = 0; i < spec.points; ++i) {
    const double x = spec.points == 1 ? spec.x_min : axis.at(i);
    const SpectrumPair e = spectrum(m, x);
    fmt::print(out, "{},{},{},{},{}\n", num(x), num(e.upper.real()), num(e.upper.imag()),
               num(e.lower.real()), num(e.lower.imag()));
  }
}

void write_steady_csv(std::ostream& out, const ModelParams& m,
                      const std::vector<SteadyState>& states) {
  out << "x,n_X,n_C,phi_CX,energy,branch,stability,residual\n";
  for (const SteadyState& s : states) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", num(s.x), num(s.n_X), num(s.n_C), num(s.phi_CX),
               num(s.energy), to_string(s.branch), to_string(s.stability),
               num(steady_residual(m, s)));
  }
}

void write_stability_csv(std::ostream& out, const std::vector<SteadyState>& states,
                         const std::vector<StabilityReport>& reports) {
  out << "x,branch,energy,verdict,margin,gauge_index,gauge_abs";
  for (int k = 0; k < 4; ++k) {
    fmt::print(out, ",re_lambda{0},im_lambda{0}", k);
  }
  out << '\n';
  for (std::size_t i = 0; i < states.size() && i < reports.size(); ++i) {
    const StabilityReport& r = reports[i];
    const std::string gauge_abs =
        r.gauge_index >= 0 ? num(std::abs(r.eigenvalues[std::size_t(r.gauge_index)])) : "";
    fmt::print(out, "{},{},{},{},{},{},{}", num(states[i].x), to_string(states[i].branch),
               num(states[i].energy), to_string(r.verdict), num(r.margin), r.gauge_index,
               gauge_abs);
    for (const cplx& l : r.eigenvalues) {
      fmt::print(out, ",{},{}", num(l.real()), num(l.imag()));
    }
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,re_psiC,im_psiC,re_psiX,im_psiX,nC2,nX2\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const TwoModeState& s = tr.states[i];
    fmt::print(out, "{},{},{},{},{},{},{}\n", num(tr.times[i]), num(s.psi_C.real()),
               num(s.psi_C.imag()), num(s.psi_X.real()), num(s.psi_X.imag()),
               num(std::norm(s.psi_C)), num(std::norm(s.psi_X)));
  }
}

void write_grid_csv(std::ostream& out, const PhaseGrid& grid) {
  out << "gamma_c,p,n_solutions,n_stable,region,sel_energy,sel_x,sel_nc,sel_phase,sel_branch\n";
  for (const PhaseCell& c : grid.cells) {
    fmt::print(out, "{},{},{},{},{},", num(c.gamma_C), num(c.p), c.n_solutions, c.n_stable,
               to_string(c.region));
    if (c.selected) {
      const SteadyState& s = *c.selected;
      fmt::print(out, "{},{},{},{},{}\n", num(s.energy), num(s.x), num(s.n_C), num(s.phi_CX),
                 to_string(s.branch));
    } else {
      out << ",,,,\n";
    }
  }
}

void write_thresholds_csv(std::ostream& out, const ThresholdCut& cut) {
  out << "gamma_c,p,kind,solutions_below,solutions_above,stable_below,stable_above\n";
  if (cut.vacuum) {
    fmt::print(out, "{},{},vacuum,,,,\n", num(cut.gamma), num(*cut.vacuum));
  }
  for (const Threshold& t : cut.changes) {
    fmt::print(out, "{},{},count,{},{},{},{}\n", num(cut.gamma), num(t.p), t.solutions_below,
               t.solutions_above, t.stable_below, t.stable_above);
  }
}

std::string critical_points_json(const CriticalPoints& cp, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["ep"] = point(cp.ep.gamma, cp.ep.p_closed);
  j["ep_numeric"] = {{"p", cp.ep.p_numeric}, {"x", cp.ep.x_coalesce}};
  j["et"] = cp.et ? point(cp.et->gamma, cp.et->p) : nlohmann::ordered_json(nullptr);
  j["r_line"] = {{"slope", cp.r_line.slope},
                 {"intercept", cp.r_line.intercept},
                 {"gamma_max", cp.r_line.gamma_max}};
  auto& poly = j["transition"] = nlohmann::ordered_json::array();
  for (const GridPoint& q : cp.transition.polyline) {
    poly.push_back(point(q.gamma, q.p));
  }
  j["transition_reaches_weak_coupling"] = cp.transition.reaches_weak_coupling;
  j["_config"] = emit_config(cfg);
  return j.dump(2) + "\n";
}

std::string verdict_json(const AsymptoticVerdict& v, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(v.kind));
  j["frequency"] = v.frequency;
  j["transient_end"] = v.transient_end;
  j["nC2"] = {v.nC2.min, v.nC2.max};
  j["nX2"] = {v.nX2.min, v.nX2.max};
  j["peak_ratio"] = v.peak_ratio;
  j["envelope_drift"] = v.envelope_drift;
  j["final_state"] = {v.final_state.psi_C.real(), v.final_state.psi_C.imag(),
                      v.final_state.psi_X.real(), v.final_state.psi_X.imag()};
  j["_config"] = emit_config(cfg);
  return j.dump(2) + "\n";
}

} // namespace nhb
