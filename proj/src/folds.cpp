#include "nhb/folds.hpp"

#include "nhb/errors.hpp"
#include "nhb/steady_state.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhb {

namespace {

using quad = boost::multiprecision::cpp_bin_float_quad;

ModelParams at(const ModelParams& m, double gamma, double p) {
  ModelParams c = m;
  c.gamma_C = gamma;
  c.p = p;
  return c;
}

void require_folds_defined(const ModelParams& m, double gamma) {
  if (!(m.g2 > 0.0) || !(gamma > 0.0) || !(m.g1 > 0.0)) {
    throw InvalidParams("fold analysis requires g1 > 0, g2 > 0 and gamma_C > 0");
  }
}

quad disc_q(const ModelParams& m) { return monic_discriminant(stationarity_cubic_t<quad>(m)); }

int sign_of(const quad& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

double double_root(const ModelParams& m) {
  const CubicT<quad> c = stationarity_cubic_t<quad>(m);
  const quad b = c.c[2] / c.c[3];
  const quad cc = c.c[1] / c.c[3];
  const quad d = c.c[0] / c.c[3];
  const quad den = b * b - 3 * cc;
  if (abs(den) <= quad(1e-30) * (b * b + abs(cc))) {
    return static_cast<double>(-b / 3);
  }
  return static_cast<double>((9 * d - b * cc) / (2 * den));
}

// Sign change of the discriminant in (pa, pb); the sign at pa is sa.
double bisect_fold(const ModelParams& m, double gamma, double pa, double pb, int sa) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (pa + pb);
    if (mid <= pa || mid >= pb) {
      break;
    }
    const int s = sign_of(disc_q(at(m, gamma, mid)));
    if (s == sa) {
      pa = mid;
    } else {
      pb = mid;
    }
  }
  return 0.5 * (pa + pb);
}

Fold make_fold(const ModelParams& m, double gamma, double p) {
  Fold f;
  f.p = p;
  const ModelParams mp = at(m, gamma, p);
  f.x = double_root(mp);
  f.admissible = f.x > 0.0 && mp.effective_gain(f.x) >= -1e-12;
  return f;
}

// Golden-section maximisation of the discriminant over [a, b].
std::pair<double, quad> maximise(const ModelParams& m, double gamma, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  quad fc = disc_q(at(m, gamma, c));
  quad fd = disc_q(at(m, gamma, d));
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = disc_q(at(m, gamma, c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = disc_q(at(m, gamma, d));
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Window near a previously known one; resolves windows narrower than the
// sampling step by maximising the discriminant around each sampled local max.
std::optional<Window> local_window(const ModelParams& m, double gamma, const Window& near) {
  constexpr int n = 400;
  const double margin = 4.0 * near.width() + 0.02;
  const double lo = near.p_lower - margin;
  const double hi = near.p_upper + margin;
  const double h = (hi - lo) / (n - 1);
  std::vector<double> ps(n);
  std::vector<quad> ds(n);
  quad scale = 0;
  for (int k = 0; k < n; ++k) {
    ps[k] = lo + h * k;
    ds[k] = disc_q(at(m, gamma, ps[k]));
    scale = std::max(scale, quad(abs(ds[k])));
  }
  const quad threshold = scale * quad(1e-24);

  double best_p = 0.0;
  quad best = -std::numeric_limits<double>::infinity();
  int best_k = -1;
  for (int k = 0; k < n; ++k) {
    const bool left_ok = k == 0 || ds[k] >= ds[k - 1];
    const bool right_ok = k == n - 1 || ds[k] >= ds[k + 1];
    if (!left_ok || !right_ok) {
      continue;
    }
    auto [p, v] = ds[k] > 0 ? std::pair{ps[k], ds[k]}
                            : maximise(m, gamma, ps[std::max(k - 1, 0)], ps[std::min(k + 1, n - 1)]);
    if (v > best) {
      best = v;
      best_p = p;
      best_k = k;
    }
  }
  if (best_k < 0 || !(best > threshold)) {
    return std::nullopt;
  }

  // Walk outwards from the maximum to the first non-positive samples.
  int kl = best_k;
  while (kl > 0 && ds[kl] > 0) --kl;
  int kr = best_k;
  while (kr < n - 1 && ds[kr] > 0) ++kr;
  const double left_a = std::min(ps[kl], best_p);
  const double right_b = std::max(ps[kr], best_p);
  Window w;
  w.p_lower = bisect_fold(m, gamma, left_a, best_p, sign_of(disc_q(at(m, gamma, left_a))));
  w.p_upper = bisect_fold(m, gamma, best_p, right_b, 1);
  return w;
}

} // namespace

double stationarity_discriminant(const ModelParams& m) {
  require_folds_defined(m, m.gamma_C);
  return static_cast<double>(disc_q(m));
}

std::vector<Fold> folds(const ModelParams& m, double gamma, double p_lo, double p_hi,
                        std::size_t samples) {
  require_folds_defined(m, gamma);
  samples = std::max<std::size_t>(samples, 2);
  std::vector<Fold> out;
  const double h = (p_hi - p_lo) / double(samples - 1);
  double prev_p = p_lo;
  int prev_s = sign_of(disc_q(at(m, gamma, p_lo)));
  for (std::size_t k = 1; k < samples; ++k) {
    const double p = k + 1 == samples ? p_hi : p_lo + h * double(k);
    const int s = sign_of(disc_q(at(m, gamma, p)));
    if (s == 0) {
      continue;
    }
    if (prev_s != 0 && s != prev_s) {
      out.push_back(make_fold(m, gamma, bisect_fold(m, gamma, prev_p, p, prev_s)));
    }
    prev_s = s;
    prev_p = p;
  }
  return out;
}

std::optional<Window> bistable_window(const ModelParams& m, double gamma, double p_lo,
                                      double p_hi, std::size_t samples) {
  std::vector<Fold> fs = folds(m, gamma, p_lo, p_hi, samples);
  std::erase_if(fs, [](const Fold& f) { return !f.admissible; });
  std::optional<Window> best;
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const double mid = 0.5 * (fs[i].p + fs[i + 1].p);
    if (disc_q(at(m, gamma, mid)) <= 0) {
      continue;
    }
    const Window w{fs[i].p, fs[i + 1].p};
    if (!best || w.width() > best->width()) {
      best = w;
    }
  }
  return best;
}

EpLocation locate_ep(const ModelParams& m) {
  const double delta = m.delta();
  if (!(delta > 0.0)) {
    throw NotBlueDetuned("exceptional point requires delta = E_C - E_X > 0");
  }
  EpLocation ep;
  ep.gamma = m.omega_R;
  ep.p_closed = m.omega_R + m.g2 * delta / m.g1;
  ep.p_numeric = std::numeric_limits<double>::quiet_NaN();
  ep.x_coalesce = std::numeric_limits<double>::quiet_NaN();
  if (!(m.g2 > 0.0) || !(m.omega_R > 0.0)) {
    return ep;
  }

  const double half = 0.05 * std::max(1.0, ep.p_closed);
  const std::vector<Fold> fs = folds(m, ep.gamma, ep.p_closed - half, ep.p_closed + half, 2001);
  const Fold* nearest = nullptr;
  for (const Fold& f : fs) {
    if (!nearest || std::abs(f.p - ep.p_closed) < std::abs(nearest->p - ep.p_closed)) {
      nearest = &f;
    }
  }
  if (nearest) {
    ep.p_numeric = nearest->p;
    ep.x_coalesce = nearest->x;
  }
  return ep;
}

EtLocation locate_et(const ModelParams& m, double gamma_lo, double gamma_hi, double p_lo,
                     double p_hi, double tol) {
  if (!(gamma_lo < gamma_hi)) {
    throw BracketInvalid("locate_et: need gamma_lo < gamma_hi");
  }
  const auto w_lo = bistable_window(m, gamma_lo, p_lo, p_hi);
  if (!w_lo) {
    throw BracketInvalid("locate_et: no bistability window at the lower bracket end");
  }
  if (bistable_window(m, gamma_hi, p_lo, p_hi)) {
    throw BracketInvalid("locate_et: bistability window still open at the upper bracket end");
  }

  EtLocation et;
  et.window_at_lo = *w_lo;
  Window current = *w_lo;
  double lo = gamma_lo;
  double hi = gamma_hi;
  const double target = std::min(tol, 1e-6) * 1e-3;
  while (hi - lo > target && et.iterations < 200) {
    ++et.iterations;
    const double mid = 0.5 * (lo + hi);
    std::optional<Window> w = bistable_window(m, mid, p_lo, p_hi);
    if (!w) {
      w = local_window(m, mid, current);
    }
    if (w) {
      lo = mid;
      current = *w;
    } else {
      hi = mid;
    }
  }
  et.gamma = 0.5 * (lo + hi);
  et.p = 0.5 * (current.p_lower + current.p_upper);
  return et;
}

TripleRootSignature triple_root_signature(const ModelParams& m) {
  require_folds_defined(m, m.gamma_C);
  TripleRootSignature sig;
  sig.discriminant = static_cast<double>(disc_q(m));
  const double h = 1e-6;
  const quad up = disc_q(at(m, m.gamma_C, m.p + h));
  const quad dn = disc_q(at(m, m.gamma_C, m.p - h));
  sig.d_discriminant_dp = static_cast<double>((up - dn) / (2 * quad(h)));

  const Cubic c = stationarity_cubic_t<double>(m);
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  for (int i = 0; i < 3; ++i) {
    companion(i, 2) = -c.c[i] / c.c[3];
  }
  const Eigen::Vector3cd r = Eigen::EigenSolver<Eigen::Matrix3d>(companion, false).eigenvalues();
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      sig.root_spread = std::max(sig.root_spread, std::abs(r(i) - r(j)));
    }
  }
  return sig;
}

} // namespace nhb
