#pragma once

#include <array>
#include <vector>

namespace nhb {

/// Real polynomial of degree <= 3, c[k] multiplies x^k.
template <class T>
struct CubicT {
  std::array<T, 4> c{};

  T operator()(T x) const { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; }
  T derivative(T x) const { return (T(3) * c[3] * x + T(2) * c[2]) * x + c[1]; }
  /// Sum of |c_k x^k|, the natural rounding scale of an evaluation at x.
  T magnitude(T x) const {
    using std::abs;
    T s = 0, xp = 1;
    for (const T& ck : c) {
      s += abs(ck) * xp;
      xp *= abs(x);
    }
    return s;
  }
};

using Cubic = CubicT<double>;

/// Discriminant of c3 x^3 + c2 x^2 + c1 x + c0 divided by c3^4, i.e. the
/// discriminant of the monic cubic. Requires c3 != 0.
template <class T>
T monic_discriminant(const CubicT<T>& p) {
  const T b = p.c[2] / p.c[3];
  const T c = p.c[1] / p.c[3];
  const T d = p.c[0] / p.c[3];
  return T(18) * b * c * d - T(4) * b * b * b * d + b * b * c * c - T(4) * c * c * c -
         T(27) * d * d;
}

struct RootOptions {
  /// Companion eigenvalues with |Im| <= imag_tol * max(1, |lambda|) are
  /// treated as candidate real roots.
  double imag_tol = 1e-6;
  /// Polished candidates must satisfy |P(x)| <= residual_tol * magnitude(x).
  double residual_tol = 1e-9;
};

/// Real roots of a polynomial of degree <= 3, sorted ascending. Leading
/// coefficients that are negligible relative to the largest one are dropped.
/// Roots come from companion-matrix eigenvalues, then Newton refinement in
/// extended precision. Multiple roots are reported once per eigenvalue, so a
/// double root may appear twice (callers deduplicate).
std::vector<double> real_roots(const Cubic& poly, const RootOptions& opts = {});

} // namespace nhb
