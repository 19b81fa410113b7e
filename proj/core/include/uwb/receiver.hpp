#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "uwb/transmitter.hpp"
#include "uwb/waveform.hpp"

namespace uwb {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s
inline constexpr double kDefaultLockThreshold = 3.0;

struct SyncState {
  double offset = 0.0;       // s, start of frame 0 in the received signal
  double peak_metric = 0.0;  // correlation peak / RMS of the correlation trace
  bool locked = false;
};

struct DecisionStat {
  double value = 0.0;
  SchemeKind scheme = SchemeKind::Ppm;
};

/// Matched-filter search: slides the regenerated preamble over lags
/// [0, search_window] and keeps the first maximum of the correlation.
/// Never throws on a failed lock; see acquire_sync.
SyncState search_sync(const SampledWaveform& rx, const LinkConfig& preamble_cfg,
                      std::span<const std::uint8_t> known_bits, double search_window,
                      double lock_threshold = kDefaultLockThreshold);

/// search_sync, throwing SyncNotFound when the peak/RMS metric is below threshold.
SyncState acquire_sync(const SampledWaveform& rx, const LinkConfig& preamble_cfg,
                       std::span<const std::uint8_t> known_bits, double search_window,
                       double lock_threshold = kDefaultLockThreshold);

/// Coherent correlation against unit-energy templates at each frame's TH chip.
/// PPM: corr(delta) - corr(0); PSM: corr(shape1) - corr(shape0); otherwise corr.
/// The statistic is positive for a transmitted 1 in every sign-decided scheme.
std::vector<DecisionStat> correlate_template(const SampledWaveform& rx, const LinkConfig& cfg,
                                             const SyncState& sync, std::size_t n_bits);

/// Square-and-integrate over each frame's TH chip window (Σ rx² / fs).
std::vector<DecisionStat> energy_detect(const SampledWaveform& rx, const LinkConfig& cfg,
                                        const SyncState& sync, std::size_t n_bits);

/// Sign slicer for antipodal/orthogonal schemes, threshold slicer for OOK and
/// asymmetric BPAM. A statistic exactly at the boundary decides 0.
Bits decide(std::span<const DecisionStat> stats, const ModulationScheme& scheme, double threshold);

/// Midpoint between the mean statistic of pilot zeros and pilot ones.
double train_threshold(std::span<const DecisionStat> stats, std::span<const std::uint8_t> pilot_bits);

double train_ook_threshold(const SampledWaveform& rx, const LinkConfig& cfg, const SyncState& sync,
                           std::span<const std::uint8_t> pilot_bits);

/// Time-of-arrival range c * (offset - emission time).
double estimate_distance(const SyncState& sync, double true_emission_time);

/// CSV with header bit_index,statistic,decided_bit.
void write_stats_csv(std::ostream& os, std::span<const DecisionStat> stats, std::span<const std::uint8_t> bits);

}  // namespace uwb
