#include "nhb/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <vector>

namespace nhb {

namespace {

// fftw_plan_* and fftw_destroy_plan are not thread-safe; fftw_execute is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

SpectralPeak dominant_frequency(std::span<const double> samples, double sample_dt) {
  SpectralPeak peak;
  const std::size_t n = samples.size();
  if (n < 8) {
    return peak;
  }

  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / double(n);
  std::vector<double> in(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
    in[i] = (samples[i] - mean) * w;
  }
  const std::size_t nbins = n / 2 + 1;
  std::vector<std::complex<double>> out(nbins);

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<double> mag(nbins);
  for (std::size_t k = 0; k < nbins; ++k) {
    mag[k] = std::abs(out[k]);
  }

  std::size_t k = 1;
  for (std::size_t j = 2; j < nbins; ++j) {
    if (mag[j] > mag[k]) {
      k = j;
    }
  }
  if (mag[k] == 0.0) {
    return peak;
  }

  std::vector<double> rest(mag.begin() + 1, mag.end());
  std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
  const double median = rest[rest.size() / 2];

  double offset = 0.0;
  if (k > 1 && k + 1 < nbins && mag[k - 1] > 0.0 && mag[k + 1] > 0.0) {
    const double a = std::log(mag[k - 1]);
    const double b = std::log(mag[k]);
    const double c = std::log(mag[k + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) {
      offset = 0.5 * (a - c) / denom;
    }
  }

  peak.bin = k;
  peak.frequency = 2.0 * std::numbers::pi * (double(k) + offset) / (double(n) * sample_dt);
  peak.peak_to_median = median > 0.0 ? mag[k] / median : std::numeric_limits<double>::infinity();
  return peak;
}

} // namespace nhb
