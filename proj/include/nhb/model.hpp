#pragma once

// Two-mode (photon, exciton) non-Hermitian model with Kerr nonlinearity and
// saturable gain on the exciton mode.
//
// Units: hbar = 1 and energies are measured in units of hbar*Omega_R, rates in
// units of Omega_R. Stationary solutions evolve as exp(-i E t / hbar), which is
// exp(-i E t) in these units.

#include <complex>

namespace nhb {

using cplx = std::complex<double>;

struct ModelParams {
  double E_C = 0.2;     // photon energy
  double E_X = 0.0;     // exciton energy
  double omega_R = 1.0; // light-matter coupling (1 in natural units)
  double gamma_C = 1.0; // photon decay rate
  double p = 0.0;       // exciton gain
  double g1 = 0.1;      // Kerr coefficient
  double g2 = 0.03;     // gain saturation coefficient

  /// Photon-exciton detuning E_C - E_X.
  double delta() const { return E_C - E_X; }
  /// Density-dependent exciton gain p - g2 x.
  double effective_gain(double x) const { return p - g2 * x; }
  /// Density-dependent exciton energy E_X + g1 x.
  double effective_energy(double x) const { return E_X + g1 * x; }
  /// Complex nonlinearity g = g1 - i g2.
  cplx nonlinearity() const { return {g1, -g2}; }
};

/// Throws InvalidParams unless gamma_C >= 0, p >= 0, g1 > 0, g2 >= 0 and all
/// fields are finite. With `require_saturation`, g2 must be strictly positive
/// (needed for finite-density steady states).
void validate(const ModelParams& params, bool require_saturation = false);

struct TwoModeState {
  cplx psi_C{};
  cplx psi_X{};

  double n_C() const { return std::abs(psi_C); }
  double n_X() const { return std::abs(psi_X); }
  double norm2() const { return std::norm(psi_C) + std::norm(psi_X); }

  TwoModeState& operator+=(const TwoModeState& o) {
    psi_C += o.psi_C;
    psi_X += o.psi_X;
    return *this;
  }
  TwoModeState& operator*=(cplx s) {
    psi_C *= s;
    psi_X *= s;
    return *this;
  }
  friend TwoModeState operator+(TwoModeState a, const TwoModeState& b) { return a += b; }
  friend TwoModeState operator-(TwoModeState a, const TwoModeState& b) {
    a.psi_C -= b.psi_C;
    a.psi_X -= b.psi_X;
    return a;
  }
  friend TwoModeState operator*(cplx s, TwoModeState a) { return a *= s; }
  friend TwoModeState operator*(double s, TwoModeState a) { return a *= cplx{s, 0.0}; }
};

/// 2x2 complex matrix [[a, b], [c, d]].
struct Matrix2c {
  cplx a, b, c, d;
  cplx trace() const { return a + d; }
  cplx det() const { return a * d - b * c; }
};

/// The effective Hamiltonian at exciton density x = |psi_X|^2.
Matrix2c hamiltonian(const ModelParams& params, double x);

/// Eigenvalues of the effective Hamiltonian: `upper` takes the + sign of the
/// square root, `lower` the - sign.
struct SpectrumPair {
  cplx upper;
  cplx lower;
};

/// Square root with non-negative real part; on the branch cut (negative real
/// radicand) the root with non-negative imaginary part is returned.
cplx principal_sqrt(cplx z);

/// Closed-form spectrum at exciton density x >= 0.
SpectrumPair spectrum(const ModelParams& params, double x);

/// Time derivative d/dt (psi_C, psi_X) of the nonlinear equations of motion.
TwoModeState rhs(const ModelParams& params, const TwoModeState& s);

} // namespace nhb
