#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <variant>
#include <vector>

#include "uwb/waveform.hpp"

namespace uwb {

struct PerfectChannel {
  double delay = 0.0;        // s
  double attenuation = 1.0;  // amplitude scale
};

struct AwgnChannel {
  double ebn0_db = 10.0;
};

/// Saleh-Valenzuela style multipath: Poisson cluster and ray arrivals with
/// double-exponential power decay, truncated at max_delay_spread.
struct MultipathSV {
  double cluster_rate = 0.047e9;  // 1/s
  double ray_rate = 1.54e9;       // 1/s
  double cluster_decay = 22.6e-9; // s
  double ray_decay = 12.5e-9;     // s
  double max_delay_spread = 80e-9;
  std::uint64_t rng_seed = 0;
};

using ChannelModel = std::variant<PerfectChannel, AwgnChannel, MultipathSV>;

/// Residential-LOS-like parameter set (cluster rate 0.047/ns, ray rate
/// 1.54/ns, decays 22.6 ns and 12.5 ns). Values come from the IEEE 802.15.4a
/// channel modelling report.
MultipathSV residential_los_preset(std::uint64_t seed = 0);

struct Tap {
  double delay = 0.0;  // s
  double gain = 0.0;
};

struct ChannelRealization {
  std::vector<Tap> taps;  // strictly increasing delays
  bool normalized = false;
};

/// One multipath component before normalization, with the arrival time of
/// its cluster and its own offset within the cluster.
struct SvRay {
  double cluster_arrival = 0.0;
  double ray_offset = 0.0;
  double gain = 0.0;
};

/// Raw ray draw: clusters and rays both start at 0, arrivals are Poisson,
/// E[gain^2] = exp(-T/Gamma) exp(-tau/gamma), Rayleigh magnitude, random sign.
std::vector<SvRay> draw_sv_rays(const MultipathSV& m, std::mt19937_64& rng);

/// Energy-normalized realization, deterministic in m.rng_seed.
ChannelRealization draw_sv_realization(const MultipathSV& m);

/// Sum over taps of gain * signal delayed by round(delay * fs) samples.
SampledWaveform convolve(const SampledWaveform& signal, const ChannelRealization& h);

SampledWaveform apply_perfect(const SampledWaveform& signal, const PerfectChannel& ch);

/// Per-sample variance (N0 / 2) * fs with N0 = eb / 10^(ebn0_db / 10).
double noise_variance(double eb, double ebn0_db, double sample_rate);

/// Adds white Gaussian noise calibrated to Eb/N0; deterministic in rng_seed.
SampledWaveform apply_awgn(const SampledWaveform& signal, double eb, double ebn0_db,
                           std::uint64_t rng_seed);

/// Amplitude scale (d0 / distance)^(exponent / 2).
double path_loss(double distance, double exponent, double d0);

/// CSV with header delay_s,gain.
void write_realization_csv(std::ostream& os, const ChannelRealization& h);

}  // namespace uwb
