#include "uwb/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "fft.hpp"
#include "uwb/error.hpp"

namespace uwb {

double Spectrum::total_power() const {
  return std::accumulate(density.begin(), density.end(), 0.0) * bin_width;
}

Spectrum psd(const SampledWaveform& signal, std::size_t segment_len) {
  if (segment_len < 2 || signal.size() < 2 * segment_len) {
    throw Error(ErrorCode::SignalTooShort, "psd needs at least two segments of data");
  }
  const std::size_t hop = segment_len / 2;
  const std::size_t bins = segment_len / 2 + 1;
  detail::RealFft fft(segment_len);
  std::vector<double> acc(bins, 0.0);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + segment_len <= signal.size(); start += hop) {
    const auto x = fft.forward(std::span(signal.samples).subspan(start, segment_len));
    for (std::size_t k = 0; k < bins; ++k) acc[k] += std::norm(x[k]);
    ++segments;
  }

  const double fs = signal.sample_rate;
  const double n = static_cast<double>(segment_len);
  Spectrum s;
  s.bin_width = fs / n;
  s.freq.resize(bins);
  s.density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    // Fold negative frequencies except at DC and (even-length) Nyquist.
    const bool edge = k == 0 || (segment_len % 2 == 0 && k == bins - 1);
    const double fold = edge ? 1.0 : 2.0;
    s.freq[k] = static_cast<double>(k) * s.bin_width;
    s.density[k] = fold * acc[k] / (static_cast<double>(segments) * n * n * s.bin_width);
  }
  return s;
}

double line_suppression(const Spectrum& no_th, const Spectrum& with_th) {
  if (no_th.freq != with_th.freq) {
    throw Error(ErrorCode::GridMismatch, "spectra are on different frequency grids");
  }
  const auto peak_to_mean = [](const Spectrum& s) {
    const double peak = *std::max_element(s.density.begin(), s.density.end());
    const double mean = std::accumulate(s.density.begin(), s.density.end(), 0.0) /
                        static_cast<double>(s.density.size());
    return peak / mean;
  };
  return 10.0 * std::log10(peak_to_mean(no_th) / peak_to_mean(with_th));
}

SampledWaveform pulse_train(const LinkConfig& cfg, std::size_t frames) {
  LinkConfig train = cfg;
  train.scheme = scheme::Ook{1.0};
  const Bits ones(frames, 1);
  return modulate(ones, train);
}

void write_psd_csv(std::ostream& os, const Spectrum& s) {
  os << "freq_hz,psd\n";
  char line[64];
  for (std::size_t k = 0; k < s.freq.size(); ++k) {
    std::snprintf(line, sizeof line, "%.9g,%.9g\n", s.freq[k], s.density[k]);
    os << line;
  }
}

}  // namespace uwb
