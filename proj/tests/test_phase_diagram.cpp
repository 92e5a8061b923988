#include "doctest.h"

#include "nhb/phase_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using nhb::ModelParams;
using nhb::Region;

namespace {

bool same(const nhb::PhaseCell& a, const nhb::PhaseCell& b) {
  if (a.n_solutions != b.n_solutions || a.n_stable != b.n_stable || a.region != b.region ||
      a.selected.has_value() != b.selected.has_value()) {
    return false;
  }
  return !a.selected || (a.selected->energy == b.selected->energy && a.selected->x == b.selected->x);
}

const nhb::PhaseGrid& reference_grid() {
  static const nhb::PhaseGrid grid = [] {
    const nhb::GridSpec spec;
    return nhb::sweep(nhb::moderate_saturation_params(), spec, nhb::grid_cell_options(spec));
  }();
  return grid;
}

} // namespace

TEST_CASE("axis endpoints are exact") {
  const nhb::Axis a{0.2, 1.6, 200};
  CHECK(a.at(0) == 0.2);
  CHECK(a.at(199) == 1.6);
  CHECK(a.step() == doctest::Approx(1.4 / 199));
}

TEST_CASE("parallel sweep reproduces the serial sweep") {
  nhb::GridSpec spec;
  spec.gamma = {0.2, 1.6, 37};
  spec.p = {0.05, 2.0, 41};
  const ModelParams m = nhb::moderate_saturation_params();
  const auto opts = nhb::grid_cell_options(spec);
  const nhb::PhaseGrid serial = nhb::sweep_serial(m, spec, opts);
  for (int jobs : {1, 2, 3, 8}) {
    const nhb::PhaseGrid par = nhb::sweep(m, spec, opts, jobs);
    REQUIRE(par.cells.size() == serial.cells.size());
    bool all = true;
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
      all = all && same(par.cells[i], serial.cells[i]);
    }
    CHECK(all);
  }
}

TEST_CASE("cell invariants over the reference grid") {
  const nhb::PhaseGrid& g = reference_grid();
  std::set<int> counts;
  for (const nhb::PhaseCell& c : g.cells) {
    counts.insert(c.n_solutions);
    CHECK(c.n_stable <= c.n_solutions);
    CHECK(c.n_solutions <= 4);
    CHECK(c.selected.has_value() == (c.n_stable > 0));
    if (c.selected) {
      CHECK(c.selected->stability == nhb::Stability::Stable);
    }
    if (c.n_solutions == 0) {
      CHECK(c.region == Region::NoLasing);
    }
    if (c.region == Region::Bistable) {
      CHECK(c.n_stable >= 2);
    }
  }
  for (int k : {0, 1, 2, 3}) {
    CHECK(counts.count(k) == 1);
  }
  // Lowest pump row lies below every vacuum threshold.
  for (std::size_t i = 0; i < g.spec.gamma.points; ++i) {
    CHECK(g.at(i, 0).region == Region::NoLasing);
  }
}

TEST_CASE("selection picks the lowest-energy stable state") {
  ModelParams m = nhb::moderate_saturation_params();
  m.gamma_C = 1.0;
  m.p = 0.8;
  const nhb::PhaseCell c = nhb::evaluate_cell(m, m.gamma_C, m.p);
  REQUIRE(c.n_solutions == 3);
  REQUIRE(c.selected);
  double lowest = 1e300;
  for (const auto& s : nhb::solve_steady_states(m).states) {
    if (nhb::classify(m, s).verdict == nhb::Stability::Stable) lowest = std::min(lowest, s.energy);
  }
  CHECK(c.selected->energy == lowest);
}

TEST_CASE("coexistence tag follows the straight line below strong coupling") {
  const ModelParams m = nhb::moderate_saturation_params();
  const nhb::RLine line = nhb::r_line(m);
  CHECK(line.intercept == doctest::Approx(0.06));
  CHECK(line.p_at(0.75) == doctest::Approx(0.81));
  nhb::CellOptions opts;
  opts.r_line_tol = 1e-3;
  CHECK(nhb::evaluate_cell(m, 0.75, 0.81, opts).region == Region::OscillatoryCoexistence);
  CHECK(nhb::evaluate_cell(m, 0.75, 0.85, opts).region != Region::OscillatoryCoexistence);
  CHECK(nhb::evaluate_cell(m, 1.2, 1.26, opts).region != Region::OscillatoryCoexistence);
}

TEST_CASE("transition line reaches weak coupling and the exceptional point") {
  const nhb::PhaseGrid& g = reference_grid();
  const nhb::TransitionLine t = nhb::transition_line(g);
  REQUIRE(!t.polyline.empty());
  CHECK(t.reaches_weak_coupling);
  CHECK(nhb::passes_near(t, g.spec, 1.0, 1.06));
  for (std::size_t k = 1; k < t.polyline.size(); ++k) {
    CHECK(t.polyline[k].gamma <= t.polyline[k - 1].gamma);
  }
}

TEST_CASE("no transition where the selection is smooth") {
  // Same p step as the reference grid: jump_tol assumes it.
  nhb::GridSpec spec;
  spec.gamma = {0.2, 0.4, 30};
  spec.p = {1.5, 2.0, 51};
  const nhb::PhaseGrid g =
      nhb::sweep(nhb::moderate_saturation_params(), spec, nhb::grid_cell_options(spec));
  CHECK(nhb::transition_line(g).marks.empty());
}

TEST_CASE("vacuum threshold at resonance equals the loss below strong coupling") {
  ModelParams m = nhb::moderate_saturation_params();
  m.E_C = m.E_X;
  for (double gamma : {0.3, 0.5, 0.8}) {
    const auto v = nhb::vacuum_threshold(m, gamma, 2.0);
    REQUIRE(v);
    CHECK(*v == doctest::Approx(gamma).epsilon(1e-8));
  }
  CHECK_FALSE(nhb::vacuum_threshold(m, 0.5, 0.3));
}

TEST_CASE("threshold cut in weak coupling") {
  const nhb::ThresholdCut cut = nhb::thresholds(nhb::moderate_saturation_params(), 1.6, 0.05, 2.0);
  REQUIRE(cut.vacuum);
  REQUIRE(cut.changes.size() == 3);
  CHECK(cut.changes[0].p == doctest::Approx(*cut.vacuum).epsilon(1e-6));
  CHECK(cut.changes[1].solutions_below == 1);
  CHECK(cut.changes[1].solutions_above == 3);
  CHECK(cut.changes[2].solutions_below == 3);
  CHECK(cut.changes[2].solutions_above == 1);
  const auto w = nhb::bistable_window(nhb::moderate_saturation_params(), 1.6, 0.05, 2.0);
  REQUIRE(w);
  CHECK(cut.changes[1].p == doctest::Approx(w->p_lower).epsilon(1e-6));
  CHECK(cut.changes[2].p == doctest::Approx(w->p_upper).epsilon(1e-6));
}

TEST_CASE("encircling the exceptional point crosses the transition") {
  const ModelParams m = nhb::moderate_saturation_params();
  const nhb::EncircleResult around = nhb::encircle(m, 0.9, 1.1, 0.95, 1.15);
  CHECK(around.unselected == 0);
  CHECK(around.jumps > 0);
  CHECK(around.jumps % 2 == 0);
  const nhb::EncircleResult away = nhb::encircle(m, 0.3, 0.5, 1.5, 1.8);
  CHECK(away.jumps == 0);
  CHECK(away.points == 801);
}
