#include "uwb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/random/normal_distribution.hpp>

#include "uwb/error.hpp"

namespace uwb {

MultipathSV residential_los_preset(std::uint64_t seed) {
  MultipathSV m;
  m.rng_seed = seed;
  return m;
}

namespace {

void check_sv(const MultipathSV& m) {
  const bool ok = m.cluster_rate > 0.0 && m.ray_rate > 0.0 && m.cluster_decay > 0.0 &&
                  m.ray_decay > 0.0 && m.max_delay_spread > 0.0;
  if (!ok) throw Error(ErrorCode::InvalidParameter, "SV rates, decays and max_delay_spread must be > 0");
}

}  // namespace

std::vector<SvRay> draw_sv_rays(const MultipathSV& m, std::mt19937_64& rng) {
  check_sv(m);
  std::exponential_distribution<double> cluster_gap(m.cluster_rate);
  std::exponential_distribution<double> ray_gap(m.ray_rate);
  std::exponential_distribution<double> unit_power(1.0);
  std::bernoulli_distribution negative(0.5);

  std::vector<SvRay> rays;
  for (double T = 0.0; T < m.max_delay_spread; T += cluster_gap(rng)) {
    for (double tau = 0.0; T + tau < m.max_delay_spread; tau += ray_gap(rng)) {
      const double mean_power = std::exp(-T / m.cluster_decay) * std::exp(-tau / m.ray_decay);
      // |g|^2 exponential <=> |g| Rayleigh.
      const double magnitude = std::sqrt(mean_power * unit_power(rng));
      rays.push_back({T, tau, negative(rng) ? -magnitude : magnitude});
    }
  }
  return rays;
}

ChannelRealization draw_sv_realization(const MultipathSV& m) {
  check_sv(m);
  std::mt19937_64 rng(m.rng_seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto rays = draw_sv_rays(m, rng);
    std::vector<Tap> taps;
    taps.reserve(rays.size());
    for (const auto& r : rays) taps.push_back({r.cluster_arrival + r.ray_offset, r.gain});
    std::sort(taps.begin(), taps.end(), [](const Tap& a, const Tap& b) { return a.delay < b.delay; });

    std::vector<Tap> merged;
    for (const auto& t : taps) {
      if (!merged.empty() && merged.back().delay == t.delay) {
        merged.back().gain += t.gain;
      } else {
        merged.push_back(t);
      }
    }
    double energy = 0.0;
    for (const auto& t : merged) energy += t.gain * t.gain;
    if (merged.empty() || !(energy > 0.0) || !std::isfinite(energy)) continue;

    const double scale = 1.0 / std::sqrt(energy);
    for (auto& t : merged) t.gain *= scale;
    return ChannelRealization{std::move(merged), true};
  }
  throw Error(ErrorCode::DegenerateRealization, "no usable SV realization after 100 draws");
}

SampledWaveform convolve(const SampledWaveform& signal, const ChannelRealization& h) {
  SampledWaveform out;
  out.sample_rate = signal.sample_rate;
  out.start_time = signal.start_time;
  if (h.taps.empty()) {
    out.samples.assign(signal.size(), 0.0);
    return out;
  }
  std::vector<std::size_t> lags(h.taps.size());
  std::transform(h.taps.begin(), h.taps.end(), lags.begin(), [&](const Tap& t) {
    return static_cast<std::size_t>(std::llround(t.delay * signal.sample_rate));
  });
  const std::size_t max_lag = *std::max_element(lags.begin(), lags.end());
  out.samples.assign(signal.size() + max_lag, 0.0);
  for (std::size_t j = 0; j < h.taps.size(); ++j) {
    const double g = h.taps[j].gain;
    double* dst = out.samples.data() + lags[j];
    for (std::size_t i = 0; i < signal.size(); ++i) dst[i] += g * signal.samples[i];
  }
  return out;
}

SampledWaveform apply_perfect(const SampledWaveform& signal, const PerfectChannel& ch) {
  if (!(ch.attenuation >= 0.0) || !(ch.delay >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "perfect channel needs delay >= 0 and attenuation >= 0");
  }
  return convolve(signal, ChannelRealization{{Tap{ch.delay, ch.attenuation}}, false});
}

double noise_variance(double eb, double ebn0_db, double sample_rate) {
  const double n0 = eb / std::pow(10.0, ebn0_db / 10.0);
  return 0.5 * n0 * sample_rate;
}

SampledWaveform apply_awgn(const SampledWaveform& signal, double eb, double ebn0_db,
                           std::uint64_t rng_seed) {
  if (!(eb > 0.0)) throw Error(ErrorCode::InvalidParameter, "apply_awgn needs eb > 0");
  const double sigma = std::sqrt(noise_variance(eb, ebn0_db, signal.sample_rate));
  std::mt19937_64 rng(rng_seed);
  boost::random::normal_distribution<double> noise(0.0, sigma);
  SampledWaveform out = signal;
  for (double& s : out.samples) s += noise(rng);
  return out;
}

double path_loss(double distance, double exponent, double d0) {
  if (!(d0 > 0.0) || !(distance >= d0)) {
    throw Error(ErrorCode::InvalidDistance, "path_loss needs distance >= d0 > 0");
  }
  return std::pow(d0 / distance, exponent / 2.0);
}

void write_realization_csv(std::ostream& os, const ChannelRealization& h) {
  os << "delay_s,gain\n";
  char line[64];
  for (const auto& t : h.taps) {
    std::snprintf(line, sizeof line, "%.9g,%.9g\n", t.delay, t.gain);
    os << line;
  }
}

}  // namespace uwb
