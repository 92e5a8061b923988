#include "nhb/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace nhb {

namespace {

long double eval_ld(const Cubic& p, long double x) {
  return ((static_cast<long double>(p.c[3]) * x + p.c[2]) * x + p.c[1]) * x + p.c[0];
}

long double deriv_ld(const Cubic& p, long double x) {
  return (3.0L * p.c[3] * x + 2.0L * p.c[2]) * x + p.c[1];
}

double polish(const Cubic& p, double x0) {
  long double x = x0;
  long double fx = std::fabs(eval_ld(p, x));
  for (int it = 0; it < 100; ++it) {
    const long double d = deriv_ld(p, x);
    if (d == 0.0L) {
      break;
    }
    const long double step = eval_ld(p, x) / d;
    const long double xn = x - step;
    const long double fn = std::fabs(eval_ld(p, xn));
    // Newton may only improve the residual; near multiple roots it converges
    // linearly, far from a real root it would wander.
    if (fn > fx) {
      break;
    }
    x = xn;
    fx = fn;
    if (std::fabs(step) <= 1e-17L * std::max(1.0L, std::fabs(x)) || fx == 0.0L) {
      break;
    }
  }
  return static_cast<double>(x);
}

} // namespace

std::vector<double> real_roots(const Cubic& poly, const RootOptions& opts) {
  const double cmax = std::max({std::abs(poly.c[0]), std::abs(poly.c[1]), std::abs(poly.c[2]),
                                std::abs(poly.c[3])});
  if (cmax == 0.0) {
    return {};
  }
  int degree = 3;
  while (degree > 0 && std::abs(poly.c[degree]) <= 1e-14 * cmax) {
    --degree;
  }
  if (degree == 0) {
    return {};
  }

  Cubic trimmed{};
  for (int k = 0; k <= degree; ++k) {
    trimmed.c[k] = poly.c[k];
  }

  std::vector<double> candidates;
  if (degree == 1) {
    candidates.push_back(-trimmed.c[0] / trimmed.c[1]);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) {
      companion(i, i - 1) = 1.0;
    }
    for (int i = 0; i < degree; ++i) {
      companion(i, degree - 1) = -trimmed.c[i] / trimmed.c[degree];
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const std::complex<double> z = ev(i);
      if (std::abs(z.imag()) <= opts.imag_tol * std::max(1.0, std::abs(z))) {
        candidates.push_back(z.real());
      }
    }
  }

  std::vector<double> roots;
  for (double x0 : candidates) {
    const double x = polish(trimmed, x0);
    if (std::abs(trimmed(x)) <= opts.residual_tol * trimmed.magnitude(x)) {
      roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

} // namespace nhb
