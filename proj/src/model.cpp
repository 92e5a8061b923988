#include "nhb/model.hpp"

#include "nhb/errors.hpp"

#include <cmath>
#include <string>

namespace nhb {

namespace {
constexpr cplx I{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw InvalidParams("invalid model parameters: " + what);
  }
}
} // namespace

void validate(const ModelParams& m, bool require_saturation) {
  for (double v : {m.E_C, m.E_X, m.omega_R, m.gamma_C, m.p, m.g1, m.g2}) {
    require(std::isfinite(v), "non-finite value");
  }
  require(m.gamma_C >= 0.0, "gamma_C must be >= 0");
  require(m.p >= 0.0, "p must be >= 0");
  require(m.g1 > 0.0, "g1 must be > 0");
  require(m.g2 >= 0.0, "g2 must be >= 0");
  require(m.omega_R >= 0.0, "omega_R must be >= 0");
  if (require_saturation) {
    require(m.g2 > 0.0, "g2 must be > 0 for steady-state solving");
  }
}

Matrix2c hamiltonian(const ModelParams& m, double x) {
  return {cplx{m.E_C, -m.gamma_C}, cplx{m.omega_R, 0.0}, cplx{m.omega_R, 0.0},
          cplx{m.effective_energy(x), m.effective_gain(x)}};
}

cplx principal_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.real() == 0.0 && r.imag() < 0.0) {
    r = -r;
  }
  return r;
}

SpectrumPair spectrum(const ModelParams& m, double x) {
  const double P = m.effective_gain(x);
  const double E = m.effective_energy(x);
  const cplx half_trace = 0.5 * cplx{m.E_C + E, P - m.gamma_C};
  const cplx off = cplx{E - m.E_C, P + m.gamma_C};
  const cplx root = principal_sqrt(4.0 * m.omega_R * m.omega_R + off * off);
  return {half_trace + 0.5 * root, half_trace - 0.5 * root};
}

TwoModeState rhs(const ModelParams& m, const TwoModeState& s) {
  const cplx x_term = cplx{m.E_X, m.p} + m.nonlinearity() * std::norm(s.psi_X);
  return {-I * (cplx{m.E_C, -m.gamma_C} * s.psi_C + m.omega_R * s.psi_X),
          -I * (m.omega_R * s.psi_C + x_term * s.psi_X)};
}

} // namespace nhb
