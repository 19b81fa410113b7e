#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uwb {

/// Uniformly sampled real baseband signal. Energy is Σ s² / sample_rate.
struct SampledWaveform {
  double sample_rate = 0.0;  // Hz
  double start_time = 0.0;   // s
  std::vector<double> samples;

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  double energy() const noexcept;

  friend bool operator==(const SampledWaveform&, const SampledWaveform&) = default;
};

enum class PulseFamily { GaussianMonocycle };

/// Gaussian-derivative pulse d^order/dt^order exp(-(t/tau)^2), rendered
/// with unit energy and then scaled by amplitude.
struct PulseShape {
  PulseFamily family = PulseFamily::GaussianMonocycle;
  int order = 1;       // 1, 2 or 3
  double tau = 0.2e-9; // s
  double amplitude = 1.0;

  /// Width of the rendered support window (8 tau).
  double support() const noexcept { return 8.0 * tau; }

  friend bool operator==(const PulseShape&, const PulseShape&) = default;
};

struct BandMeasurement {
  double f_low = 0.0;   // Hz
  double f_high = 0.0;  // Hz
  double fractional_bandwidth = 0.0;

  double bandwidth() const noexcept { return f_high - f_low; }
};

inline constexpr double kDefaultSampleRate = 50e9;

/// Samples the pulse on t = k / sample_rate for |t| <= 4 tau. Throws
/// UndersampledPulse when sample_rate < 10 / tau.
SampledWaveform render_pulse(const PulseShape& shape, double sample_rate);

/// Number of samples render_pulse produces for this shape and rate.
std::size_t pulse_support_samples(const PulseShape& shape, double sample_rate);

SampledWaveform normalize_energy(const SampledWaveform& w);

/// -10 dB band edges of the magnitude spectrum and the resulting
/// fractional bandwidth 2 (fH - fL) / (fH + fL).
BandMeasurement measure_band(const SampledWaveform& w);

BandMeasurement make_band(double f_low, double f_high);

/// >= 500 MHz of -10 dB bandwidth, or fractional bandwidth above 20 %.
bool is_uwb(const BandMeasurement& b);

/// Time span over which |s| stays within 10 dB of its peak.
double minus10db_duration(const SampledWaveform& w);

/// Normalized inner product <a, b> / (|a| |b|) over aligned sample grids
/// (both waveforms must share rate and length).
double cross_correlation(const SampledWaveform& a, const SampledWaveform& b);

}  // namespace uwb
