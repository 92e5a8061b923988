#include "nhb/phase_diagram.hpp"

#include "nhb/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>

namespace nhb {

std::string_view to_string(Region r) {
  switch (r) {
  case Region::NoLasing: return "NoLasing";
  case Region::Single: return "Single";
  case Region::Bistable: return "Bistable";
  case Region::OscillatoryCoexistence: return "OscillatoryCoexistence";
  case Region::UnstableOnly: break;
  }
  return "UnstableOnly";
}

RLine r_line(const ModelParams& m) {
  RLine r;
  r.slope = 1.0;
  r.intercept = m.g2 * m.delta() / m.g1;
  r.gamma_max = m.omega_R;
  return r;
}

PhaseCell evaluate_cell(const ModelParams& base, double gamma, double p, const CellOptions& opts) {
  ModelParams m = base;
  m.gamma_C = gamma;
  m.p = p;
  PhaseCell cell;
  cell.gamma_C = gamma;
  cell.p = p;

  SteadyStateSet set;
  try {
    set = solve_steady_states(m, opts.steady);
  } catch (const Error&) {
    cell.n_failures = 1;
    return cell;
  }
  cell.n_failures = int(set.failures.size());
  for (SteadyState& s : set.states) {
    try {
      s.stability = classify(m, s, opts.stability).verdict;
    } catch (const Error&) {
      s.stability = Stability::Unknown;
      ++cell.n_failures;
    }
    ++cell.n_solutions;
    if (s.stability == Stability::Stable) {
      ++cell.n_stable;
      if (!cell.selected || s.energy < cell.selected->energy) {
        cell.selected = s;
      }
    } else if (s.stability == Stability::Marginal) {
      ++cell.n_marginal;
    }
  }

  const RLine rl = r_line(m);
  if (cell.n_solutions == 0) {
    cell.region = Region::NoLasing;
  } else if (opts.r_line_tol > 0.0 && gamma < rl.gamma_max &&
             std::abs(p - rl.p_at(gamma)) < opts.r_line_tol) {
    cell.region = Region::OscillatoryCoexistence;
  } else if (cell.n_stable == 0) {
    cell.region = Region::UnstableOnly;
  } else if (cell.n_stable >= 2) {
    cell.region = Region::Bistable;
  } else {
    cell.region = Region::Single;
  }
  return cell;
}

CellOptions grid_cell_options(const GridSpec& spec) {
  CellOptions o;
  o.r_line_tol = 0.5 * spec.p.step();
  return o;
}

namespace {

void check_grid(const GridSpec& spec) {
  if (spec.gamma.points < 2 || spec.p.points < 2) {
    throw InvalidParams("sweep: need at least 2 points per axis");
  }
}

} // namespace

PhaseGrid sweep_serial(const ModelParams& params, const GridSpec& spec, const CellOptions& opts) {
  check_grid(spec);
  PhaseGrid g;
  g.params = params;
  g.opts = opts;
  g.spec = spec;
  g.cells.reserve(spec.gamma.points * spec.p.points);
  for (std::size_t j = 0; j < spec.p.points; ++j) {
    for (std::size_t i = 0; i < spec.gamma.points; ++i) {
      g.cells.push_back(evaluate_cell(params, spec.gamma.at(i), spec.p.at(j), opts));
    }
  }
  return g;
}

PhaseGrid sweep(const ModelParams& params, const GridSpec& spec, const CellOptions& opts,
                int jobs) {
  check_grid(spec);
  PhaseGrid g;
  g.params = params;
  g.opts = opts;
  g.spec = spec;
  const std::size_t ng = spec.gamma.points;
  const auto n = static_cast<std::int64_t>(ng * spec.p.points);
  g.cells.resize(std::size_t(n));
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  // Cost varies across the plane (empty cells are cheap), hence dynamic.
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::int64_t k = 0; k < n; ++k) {
    const std::size_t i = std::size_t(k) % ng;
    const std::size_t j = std::size_t(k) / ng;
    g.cells[std::size_t(k)] = evaluate_cell(params, spec.gamma.at(i), spec.p.at(j), opts);
  }
  return g;
}

namespace {

std::optional<double> selected_energy(const PhaseCell& c) {
  return c.selected ? std::optional(c.selected->energy) : std::nullopt;
}

bool jumps(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  return a && b && std::abs(*a - *b) > tol;
}

// Folds inside the p-edge (j, j+1) of column i whose two sides select states
// that differ by more than tol from each other or from the edge's ends.
void fold_marks(const PhaseGrid& grid, std::size_t i, std::size_t j, double tol,
                std::vector<GridPoint>& marks) {
  const PhaseCell& lo = grid.at(i, j);
  const PhaseCell& hi = grid.at(i, j + 1);
  if (lo.n_solutions < 2 && hi.n_solutions < 2) {
    return;
  }
  const double gamma = lo.gamma_C;
  std::vector<Fold> fs;
  try {
    fs = folds(grid.params, gamma, lo.p, hi.p, 4);
  } catch (const Error&) {
    return;
  }
  for (const Fold& f : fs) {
    if (!f.admissible) continue;
    const double eps = 1e-7 * std::max(1.0, f.p);
    const auto below = selected_energy(evaluate_cell(grid.params, gamma, f.p - eps, grid.opts));
    const auto above = selected_energy(evaluate_cell(grid.params, gamma, f.p + eps, grid.opts));
    const std::optional<double> seq[] = {selected_energy(lo), below, above, selected_energy(hi)};
    if (jumps(seq[0], seq[1], tol) || jumps(seq[1], seq[2], tol) || jumps(seq[2], seq[3], tol)) {
      marks.push_back({gamma, f.p});
    }
  }
}

} // namespace

TransitionLine transition_line(const PhaseGrid& grid, double jump_tol) {
  TransitionLine line;
  const GridSpec& s = grid.spec;
  for (std::size_t j = 0; j < s.p.points; ++j) {
    for (std::size_t i = 0; i < s.gamma.points; ++i) {
      const PhaseCell& c = grid.at(i, j);
      if (i + 1 < s.gamma.points &&
          jumps(selected_energy(c), selected_energy(grid.at(i + 1, j)), jump_tol)) {
        line.marks.push_back({0.5 * (c.gamma_C + grid.at(i + 1, j).gamma_C), c.p});
      }
      if (j + 1 < s.p.points) {
        if (jumps(selected_energy(c), selected_energy(grid.at(i, j + 1)), jump_tol)) {
          line.marks.push_back({c.gamma_C, 0.5 * (c.p + grid.at(i, j + 1).p)});
        } else {
          fold_marks(grid, i, j, jump_tol, line.marks);
        }
      }
    }
  }
  if (line.marks.empty()) {
    return line;
  }

  // Connected components of marks at most 1.5 cells apart on either axis.
  const double sg = s.gamma.step();
  const double sp = s.p.step();
  const std::size_t n = line.marks.size();
  std::vector<int> component(n, -1);
  int best = -1;
  std::size_t best_size = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (component[seed] >= 0) continue;
    const int id = int(seed);
    std::vector<std::size_t> stack{seed};
    component[seed] = id;
    std::size_t size = 0;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      ++size;
      for (std::size_t b = 0; b < n; ++b) {
        if (component[b] >= 0) continue;
        if (std::abs(line.marks[a].gamma - line.marks[b].gamma) <= 1.5 * sg &&
            std::abs(line.marks[a].p - line.marks[b].p) <= 1.5 * sp) {
          component[b] = id;
          stack.push_back(b);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = id;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (component[k] == best) {
      line.polyline.push_back(line.marks[k]);
    }
  }
  std::sort(line.polyline.begin(), line.polyline.end(), [](const GridPoint& a, const GridPoint& b) {
    return std::tie(b.gamma, a.p) < std::tie(a.gamma, b.p);
  });
  const double omega_R = grid.params.omega_R;
  line.reaches_weak_coupling = std::any_of(line.polyline.begin(), line.polyline.end(),
                                           [omega_R](const GridPoint& q) { return q.gamma > omega_R; });
  return line;
}

bool passes_near(const TransitionLine& line, const GridSpec& spec, double gamma, double p) {
  return std::any_of(line.polyline.begin(), line.polyline.end(), [&](const GridPoint& q) {
    return std::abs(q.gamma - gamma) <= spec.gamma.step() && std::abs(q.p - p) <= spec.p.step();
  });
}

std::optional<double> vacuum_threshold(const ModelParams& base, double gamma, double p_max) {
  auto growth = [&](double p) {
    ModelParams m = base;
    m.gamma_C = gamma;
    m.p = p;
    const SpectrumPair e = spectrum(m, 0.0);
    return std::max(e.upper.imag(), e.lower.imag());
  };
  if (growth(0.0) > 0.0) {
    return 0.0;
  }
  constexpr int n = 400;
  double a = 0.0;
  for (int k = 1; k <= n; ++k) {
    double b = p_max * double(k) / n;
    if (growth(b) > 0.0) {
      for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        (growth(mid) > 0.0 ? b : a) = mid;
      }
      return 0.5 * (a + b);
    }
    a = b;
  }
  return std::nullopt;
}

ThresholdCut thresholds(const ModelParams& params, double gamma, double p_lo, double p_hi,
                        std::size_t samples, const CellOptions& opts) {
  ThresholdCut cut;
  cut.gamma = gamma;
  const std::optional<double> vac = vacuum_threshold(params, gamma, p_hi);
  if (vac && *vac >= p_lo) {
    cut.vacuum = vac;
  }

  samples = std::max<std::size_t>(samples, 2);
  auto counts = [&](double p) {
    const PhaseCell c = evaluate_cell(params, gamma, p, opts);
    return std::pair{c.n_solutions, c.n_stable};
  };
  const Axis axis{p_lo, p_hi, samples};
  double prev_p = p_lo;
  auto prev = counts(p_lo);
  for (std::size_t k = 1; k < samples; ++k) {
    const double p = axis.at(k);
    const auto cur = counts(p);
    if (cur != prev) {
      double a = prev_p;
      double b = p;
      for (int it = 0; it < 60 && b - a > 1e-14 * std::max(1.0, b); ++it) {
        const double mid = 0.5 * (a + b);
        (counts(mid) == prev ? a : b) = mid;
      }
      cut.changes.push_back({0.5 * (a + b), prev.first, cur.first, prev.second, cur.second});
    }
    prev = cur;
    prev_p = p;
  }
  return cut;
}

EncircleResult encircle(const ModelParams& params, double g0, double g1, double p0, double p1,
                        std::size_t per_side, double jump_tol) {
  EncircleResult res;
  const GridPoint corners[5] = {{g0, p0}, {g1, p0}, {g1, p1}, {g0, p1}, {g0, p0}};
  std::vector<std::optional<double>> energies;
  for (int side = 0; side < 4; ++side) {
    for (std::size_t k = 0; k < per_side; ++k) {
      const double t = double(k) / double(per_side);
      const double g = corners[side].gamma + t * (corners[side + 1].gamma - corners[side].gamma);
      const double p = corners[side].p + t * (corners[side + 1].p - corners[side].p);
      const PhaseCell c = evaluate_cell(params, g, p);
      energies.push_back(c.selected ? std::optional(c.selected->energy) : std::nullopt);
    }
  }
  energies.push_back(energies.front());
  res.points = energies.size();

  std::optional<double> last;
  for (const auto& e : energies) {
    if (!e) {
      ++res.unselected;
      continue;
    }
    if (last && std::abs(*e - *last) > jump_tol) {
      ++res.jumps;
    }
    last = e;
  }
  return res;
}

ModelParams moderate_saturation_params() {
  ModelParams m;
  m.E_C = 0.2;
  m.E_X = 0.0;
  m.omega_R = 1.0;
  m.g1 = 0.1;
  m.g2 = 0.03;
  return m;
}

ModelParams strong_saturation_params() {
  ModelParams m = moderate_saturation_params();
  m.g2 = 0.45;
  return m;
}

} // namespace nhb
