#pragma once

#include <cstddef>
#include <span>

namespace nhb {

struct SpectralPeak {
  double frequency = 0.0;     // angular frequency [Omega_R]
  double peak_to_median = 0.0; // peak magnitude over median magnitude
  std::size_t bin = 0;
};

/// Dominant nonzero frequency of a uniformly sampled real signal. The mean is
/// removed and a Hann window applied; the peak bin is refined by a Gaussian
/// (log-parabolic) fit through the peak and its neighbours.
SpectralPeak dominant_frequency(std::span<const double> samples, double sample_dt);

} // namespace nhb
