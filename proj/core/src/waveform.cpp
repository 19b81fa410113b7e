#include "uwb/waveform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>

#include "fft.hpp"
#include "uwb/error.hpp"

namespace uwb {

namespace {

// Hermite-polynomial form of the derivatives of exp(-x^2), up to a constant.
double gaussian_derivative(int order, double x) {
  const double g = std::exp(-x * x);
  switch (order) {
    case 1: return -2.0 * x * g;
    case 2: return (4.0 * x * x - 2.0) * g;
    case 3: return -(8.0 * x * x * x - 12.0 * x) * g;
  }
  throw Error(ErrorCode::InvalidParameter, "monocycle order must be 1, 2 or 3");
}

std::ptrdiff_t half_width_samples(const PulseShape& shape, double sample_rate) {
  return static_cast<std::ptrdiff_t>(std::floor(4.0 * shape.tau * sample_rate + 1e-9));
}

double sum_squares(std::span<const double> xs) {
  return std::transform_reduce(xs.begin(), xs.end(), 0.0, std::plus<>{},
                               [](double v) { return v * v; });
}

}  // namespace

double SampledWaveform::energy() const noexcept {
  return sum_squares(samples) / sample_rate;
}

std::size_t pulse_support_samples(const PulseShape& shape, double sample_rate) {
  return static_cast<std::size_t>(2 * half_width_samples(shape, sample_rate) + 1);
}

SampledWaveform render_pulse(const PulseShape& shape, double sample_rate) {
  if (!(shape.tau > 0.0) || !std::isfinite(shape.tau)) {
    throw Error(ErrorCode::InvalidParameter, "pulse tau must be positive");
  }
  if (shape.order < 1 || shape.order > 3) {
    throw Error(ErrorCode::InvalidParameter, "monocycle order must be 1, 2 or 3");
  }
  if (!std::isfinite(shape.amplitude)) {
    throw Error(ErrorCode::InvalidParameter, "pulse amplitude must be finite");
  }
  if (!(sample_rate * shape.tau >= 10.0 * (1.0 - 1e-12))) {
    throw Error(ErrorCode::UndersampledPulse, "sample_rate must be at least 10 / tau");
  }

  const auto n = half_width_samples(shape, sample_rate);
  SampledWaveform w;
  w.sample_rate = sample_rate;
  w.start_time = -static_cast<double>(n) / sample_rate;
  w.samples.resize(static_cast<std::size_t>(2 * n + 1));
  for (std::ptrdiff_t k = -n; k <= n; ++k) {
    const double x = (static_cast<double>(k) / sample_rate) / shape.tau;
    w.samples[static_cast<std::size_t>(k + n)] = gaussian_derivative(shape.order, x);
  }
  // Odd orders are exactly odd-symmetric on the symmetric grid.
  if (shape.order % 2 == 1) {
    w.samples[static_cast<std::size_t>(n)] = 0.0;
    for (std::ptrdiff_t k = 1; k <= n; ++k) {
      w.samples[static_cast<std::size_t>(n - k)] = -w.samples[static_cast<std::size_t>(n + k)];
    }
  }

  const double scale = shape.amplitude / std::sqrt(w.energy());
  for (double& s : w.samples) s *= scale;
  return w;
}

SampledWaveform normalize_energy(const SampledWaveform& w) {
  const double e = w.energy();
  if (!(e > 0.0) || !std::isfinite(e)) {
    throw Error(ErrorCode::ZeroEnergyWaveform, "cannot normalize a zero-energy waveform");
  }
  SampledWaveform out = w;
  const double scale = 1.0 / std::sqrt(e);
  for (double& s : out.samples) s *= scale;
  return out;
}

BandMeasurement make_band(double f_low, double f_high) {
  if (!(f_low >= 0.0) || !(f_high >= f_low)) {
    throw Error(ErrorCode::InvalidParameter, "band edges must satisfy 0 <= f_low <= f_high");
  }
  BandMeasurement b{f_low, f_high, 0.0};
  const double sum = f_high + f_low;
  b.fractional_bandwidth = sum > 0.0 ? 2.0 * (f_high - f_low) / sum : 0.0;
  return b;
}

BandMeasurement measure_band(const SampledWaveform& w) {
  if (!(w.energy() > 0.0)) {
    throw Error(ErrorCode::ZeroEnergyWaveform, "cannot measure band of a zero waveform");
  }
  const std::size_t nfft = std::max<std::size_t>(4096, std::bit_ceil(4 * w.size()));
  detail::RealFft fft(nfft);
  const auto spectrum = fft.forward(w.samples);

  std::vector<double> mag(spectrum.size());
  std::transform(spectrum.begin(), spectrum.end(), mag.begin(),
                 [](std::complex<double> c) { return std::abs(c); });
  const double peak = *std::max_element(mag.begin(), mag.end());
  const double threshold = peak * std::pow(10.0, -10.0 / 20.0);
  const double df = w.sample_rate / static_cast<double>(nfft);

  const auto crossing = [&](std::size_t below, std::size_t above) {
    const double frac = (threshold - mag[below]) / (mag[above] - mag[below]);
    return (static_cast<double>(below) +
            frac * (static_cast<double>(above) - static_cast<double>(below))) * df;
  };

  std::size_t lo = 0;
  while (mag[lo] < threshold) ++lo;
  std::size_t hi = mag.size() - 1;
  while (mag[hi] < threshold) --hi;

  const double f_low = lo == 0 ? 0.0 : crossing(lo - 1, lo);
  const double f_high = hi == mag.size() - 1 ? static_cast<double>(hi) * df : crossing(hi + 1, hi);
  return make_band(f_low, std::max(f_low, f_high));
}

bool is_uwb(const BandMeasurement& b) {
  return b.bandwidth() >= 500e6 || b.fractional_bandwidth > 0.20;
}

double minus10db_duration(const SampledWaveform& w) {
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) return 0.0;
  const double threshold = peak * std::pow(10.0, -10.0 / 20.0);
  const auto above = [&](double s) { return std::abs(s) >= threshold; };
  const auto first = std::find_if(w.samples.begin(), w.samples.end(), above);
  const auto last = std::find_if(w.samples.rbegin(), w.samples.rend(), above);
  const auto span = std::distance(first, last.base());
  return static_cast<double>(span) / w.sample_rate;
}

double cross_correlation(const SampledWaveform& a, const SampledWaveform& b) {
  if (a.sample_rate != b.sample_rate) {
    throw Error(ErrorCode::SampleRateMismatch, "cross_correlation needs equal sample rates");
  }
  if (a.size() != b.size()) {
    throw Error(ErrorCode::InvalidParameter, "cross_correlation needs equal lengths");
  }
  const double ea = sum_squares(a.samples);
  const double eb = sum_squares(b.samples);
  if (ea == 0.0 || eb == 0.0) {
    throw Error(ErrorCode::ZeroEnergyWaveform, "cross_correlation of a zero waveform");
  }
  const double dot = std::inner_product(a.samples.begin(), a.samples.end(), b.samples.begin(), 0.0);
  return dot / std::sqrt(ea * eb);
}

}  // namespace uwb
