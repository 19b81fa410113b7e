#include "uwb/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

#include "uwb/error.hpp"

namespace uwb {

namespace {

struct TemplateSample {
  std::size_t index;
  double value;
};

// Dot product of a unit-energy template with rx starting at rx index `pos`,
// scaled by 1/fs; samples outside rx count as zero.
double correlate_at(const SampledWaveform& rx, const std::vector<double>& tmpl, long long pos) {
  const auto n = static_cast<long long>(rx.size());
  const auto m = static_cast<long long>(tmpl.size());
  const long long lo = std::max(0LL, -pos);
  const long long hi = std::min(m, n - pos);
  double acc = 0.0;
  for (long long i = lo; i < hi; ++i) acc += tmpl[static_cast<std::size_t>(i)] * rx.samples[static_cast<std::size_t>(pos + i)];
  return acc / rx.sample_rate;
}

double energy_at(const SampledWaveform& rx, long long pos, std::size_t len) {
  const auto n = static_cast<long long>(rx.size());
  const long long lo = std::max(0LL, pos);
  const long long hi = std::min(n, pos + static_cast<long long>(len));
  double acc = 0.0;
  for (long long i = lo; i < hi; ++i) {
    const double v = rx.samples[static_cast<std::size_t>(i)];
    acc += v * v;
  }
  return acc / rx.sample_rate;
}

void require_lock(const SyncState& sync) {
  if (!sync.locked) throw Error(ErrorCode::NotSynchronized, "receiver is not synchronized");
}

// Index in rx of the first sample of frame 0.
long long frame_origin(const SampledWaveform& rx, const SyncState& sync) {
  return std::llround((sync.offset - rx.start_time) * rx.sample_rate);
}

std::vector<double> unit_template(const SampledWaveform& pulse) {
  return normalize_energy(pulse).samples;
}

}  // namespace

SyncState search_sync(const SampledWaveform& rx, const LinkConfig& preamble_cfg,
                      std::span<const std::uint8_t> known_bits, double search_window,
                      double lock_threshold) {
  if (rx.sample_rate != preamble_cfg.sample_rate) {
    throw Error(ErrorCode::SampleRateMismatch, "rx and preamble sample rates differ");
  }
  const SampledWaveform preamble = modulate(known_bits, preamble_cfg);
  std::vector<TemplateSample> tmpl;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < preamble.size(); ++i) {
    if (preamble.samples[i] != 0.0) {
      tmpl.push_back({i, preamble.samples[i]});
      norm2 += preamble.samples[i] * preamble.samples[i];
    }
  }
  SyncState state;
  if (tmpl.empty() || rx.size() == 0) return state;
  const double inv_norm = 1.0 / std::sqrt(norm2);

  const auto max_lag = static_cast<std::size_t>(std::max(0LL, std::llround(search_window * rx.sample_rate)));
  const std::size_t n = rx.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_lag = 0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t lag = 0; lag <= max_lag && lag < n; ++lag) {
    double acc = 0.0;
    for (const auto& t : tmpl) {
      const std::size_t j = lag + t.index;
      if (j >= n) break;
      acc += t.value * rx.samples[j];
    }
    acc *= inv_norm;
    sum_sq += acc * acc;
    ++count;
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  const double rms = std::sqrt(sum_sq / static_cast<double>(count));
  state.offset = rx.start_time + static_cast<double>(best_lag) / rx.sample_rate;
  state.peak_metric = rms > 0.0 ? best / rms : 0.0;
  state.locked = rms > 0.0 && state.peak_metric >= lock_threshold;
  return state;
}

SyncState acquire_sync(const SampledWaveform& rx, const LinkConfig& preamble_cfg,
                       std::span<const std::uint8_t> known_bits, double search_window,
                       double lock_threshold) {
  SyncState s = search_sync(rx, preamble_cfg, known_bits, search_window, lock_threshold);
  if (!s.locked) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "peak/RMS %.3f below lock threshold %.3f", s.peak_metric, lock_threshold);
    throw Error(ErrorCode::SyncNotFound, msg);
  }
  return s;
}

std::vector<DecisionStat> correlate_template(const SampledWaveform& rx, const LinkConfig& cfg,
                                             const SyncState& sync, std::size_t n_bits) {
  require_lock(sync);
  const PulseSet pulses = make_pulse_set(cfg);
  const auto t0 = unit_template(pulses.pulses[0]);
  const auto t1 = pulses.pulses.size() > 1 ? unit_template(pulses.pulses[1]) : std::vector<double>{};
  const SampleTiming st = to_samples(cfg.timing, cfg.sample_rate);
  const long long origin = frame_origin(rx, sync);
  const SchemeKind kind = scheme_kind(cfg.scheme);

  std::vector<DecisionStat> stats(n_bits);
  for (std::size_t k = 0; k < n_bits; ++k) {
    const long long pos = origin + static_cast<long long>(k * st.frame) +
                          static_cast<long long>(cfg.code.at(k)) * static_cast<long long>(st.chip);
    double value = correlate_at(rx, t0, pos);
    if (kind == SchemeKind::Ppm) {
      // Positive when the pulse sits in the shifted ("1") position.
      value = correlate_at(rx, t0, pos + static_cast<long long>(st.ppm)) - value;
    } else if (kind == SchemeKind::Psm) {
      value = correlate_at(rx, t1, pos) - value;
    }
    stats[k] = {value, kind};
  }
  return stats;
}

std::vector<DecisionStat> energy_detect(const SampledWaveform& rx, const LinkConfig& cfg,
                                        const SyncState& sync, std::size_t n_bits) {
  require_lock(sync);
  const SampleTiming st = to_samples(cfg.timing, cfg.sample_rate);
  const long long origin = frame_origin(rx, sync);
  const SchemeKind kind = scheme_kind(cfg.scheme);
  std::vector<DecisionStat> stats(n_bits);
  for (std::size_t k = 0; k < n_bits; ++k) {
    const long long pos = origin + static_cast<long long>(k * st.frame) +
                          static_cast<long long>(cfg.code.at(k)) * static_cast<long long>(st.chip);
    stats[k] = {energy_at(rx, pos, st.chip), kind};
  }
  return stats;
}

Bits decide(std::span<const DecisionStat> stats, const ModulationScheme& scheme, double threshold) {
  const bool sign = uses_sign_decision(scheme);
  const double cut = sign ? 0.0 : threshold;
  Bits bits(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) bits[i] = stats[i].value > cut ? 1 : 0;
  return bits;
}

double train_threshold(std::span<const DecisionStat> stats, std::span<const std::uint8_t> pilot_bits) {
  if (stats.size() != pilot_bits.size()) {
    throw Error(ErrorCode::InvalidParameter, "pilot statistics and pilot bits differ in length");
  }
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const int b = pilot_bits[i] ? 1 : 0;
    sum[b] += stats[i].value;
    ++count[b];
  }
  if (count[0] == 0 || count[1] == 0) {
    throw Error(ErrorCode::PilotMissingSymbol, "pilot sequence must contain both 0 and 1");
  }
  return 0.5 * (sum[0] / static_cast<double>(count[0]) + sum[1] / static_cast<double>(count[1]));
}

double train_ook_threshold(const SampledWaveform& rx, const LinkConfig& cfg, const SyncState& sync,
                           std::span<const std::uint8_t> pilot_bits) {
  bool has[2] = {false, false};
  for (auto b : pilot_bits) has[b ? 1 : 0] = true;
  if (!has[0] || !has[1]) {
    throw Error(ErrorCode::PilotMissingSymbol, "pilot sequence must contain both 0 and 1");
  }
  const auto stats = energy_detect(rx, cfg, sync, pilot_bits.size());
  return train_threshold(stats, pilot_bits);
}

double estimate_distance(const SyncState& sync, double true_emission_time) {
  require_lock(sync);
  return kSpeedOfLight * (sync.offset - true_emission_time);
}

void write_stats_csv(std::ostream& os, std::span<const DecisionStat> stats, std::span<const std::uint8_t> bits) {
  os << "bit_index,statistic,decided_bit\n";
  char line[80];
  for (std::size_t i = 0; i < stats.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.9g,%d\n", i, stats[i].value,
                  i < bits.size() ? static_cast<int>(bits[i]) : -1);
    os << line;
  }
}

}  // namespace uwb
