#include "uwb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "uwb/error.hpp"
#include "uwb/receiver.hpp"

namespace uwb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::size_t kNoSwitch = std::numeric_limits<std::size_t>::max();

// Sub-stream tags mixed into a trial seed.
enum Stream : std::uint64_t { kPayloadBits = 1, kNoise = 2, kUser2Bits = 3, kUser2Channel = 4, kInterfererBits = 5 };

std::uint64_t substream(std::uint64_t trial_seed, Stream s) { return mix64(trial_seed ^ (s * 0x9e37ULL)); }

Bits random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bits bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return bits;
}

struct Segment {
  LinkConfig cfg;          // code already phase-shifted to the segment start
  std::size_t first = 0;   // first stream frame
  std::size_t frames = 0;
  double start_time = 0.0; // s
};

struct BlockOutcome {
  std::size_t errors1 = 0, bits1 = 0;
  std::size_t errors2 = 0, bits2 = 0;
  std::size_t boundary_errors = 0;
  std::size_t collisions1 = 0, collisions2 = 0;
  bool sync_failed = false;
};

bool adds_noise(const ExperimentConfig& cfg) {
  return std::visit(overloaded{
                        [](const PerfectChannel&) { return false; },
                        [](const AwgnChannel&) { return true; },
                        [&](const MultipathSV&) { return cfg.multipath_awgn; },
                    },
                    cfg.channel);
}

PerfectChannel propagation_of(const ExperimentConfig& cfg) {
  if (const auto* p = std::get_if<PerfectChannel>(&cfg.channel)) return *p;
  return cfg.propagation;
}

ChannelRealization block_channel(const ExperimentConfig& cfg, std::uint64_t channel_seed) {
  const PerfectChannel prop = propagation_of(cfg);
  ChannelRealization h;
  if (const auto* sv = std::get_if<MultipathSV>(&cfg.channel)) {
    MultipathSV m = *sv;
    m.rng_seed = channel_seed;
    h = draw_sv_realization(m);
    for (auto& t : h.taps) {
      t.delay += prop.delay;
      t.gain *= prop.attenuation;
    }
  } else {
    h.taps = {Tap{prop.delay, prop.attenuation}};
  }
  return h;
}

PulseSet through_channel(const LinkConfig& cfg, const ChannelRealization& h) {
  PulseSet set = make_pulse_set(cfg);
  for (auto& p : set.pulses) p = convolve(p, h);
  return set;
}

std::uint64_t channel_seed(const ExperimentConfig& cfg, std::size_t block) {
  // Shared by every grid point so that curves see the same channel draws.
  const auto* sv = std::get_if<MultipathSV>(&cfg.channel);
  return derive_seed(cfg.master_seed, sv ? sv->rng_seed : 0, block);
}

std::vector<DecisionStat> demodulate(const SampledWaveform& rx, const LinkConfig& cfg, const SyncState& sync,
                                     std::size_t frames) {
  if (scheme_kind(cfg.scheme) == SchemeKind::Ook) return energy_detect(rx, cfg, sync, frames);
  return correlate_template(rx, cfg, sync, frames);
}

// One trial block: preamble + payload through link, channel and receiver.
BlockOutcome run_block(const ExperimentConfig& cfg, const LinkConfig& cfg_b, double ebn0_db,
                       std::size_t point_index, std::size_t block, std::size_t payload_first,
                       std::size_t payload_bits) {
  const std::uint64_t trial = derive_seed(cfg.master_seed, point_index, block);
  const Bits preamble = preamble_bits();
  const std::size_t P = preamble.size();

  const auto* reconf = std::get_if<scenario::Reconfigure>(&cfg.scenario);
  const std::size_t sw = reconf ? reconf->switch_frame : kNoSwitch;

  // Stream frames before the switch use the original link.
  std::size_t frames_a = 0;
  if (payload_first < sw) frames_a = P + std::min(sw - payload_first, payload_bits);
  const std::size_t total = P + payload_bits;

  std::vector<Segment> segments;
  const auto add_segment = [&](const LinkConfig& base, std::size_t first, std::size_t frames) {
    if (frames == 0) return;
    Segment s;
    s.cfg = base;
    s.cfg.code = shifted_code(base.code, first);
    s.first = first;
    s.frames = frames;
    s.start_time = segments.empty()
                       ? 0.0
                       : segments.back().start_time +
                             static_cast<double>(segments.back().frames) * segments.back().cfg.timing.frame_duration();
    segments.push_back(std::move(s));
  };
  add_segment(cfg.link, 0, frames_a);
  add_segment(cfg_b, frames_a, total - frames_a);

  Bits bits = preamble;
  const Bits payload = random_bits(payload_bits, substream(trial, kPayloadBits));
  bits.insert(bits.end(), payload.begin(), payload.end());

  const ChannelRealization h = block_channel(cfg, channel_seed(cfg, block));

  std::vector<UserSignal> users;
  for (const auto& seg : segments) {
    const auto pulses = through_channel(seg.cfg, h);
    const std::span<const std::uint8_t> seg_bits(bits.data() + seg.first, seg.frames);
    users.push_back({modulate(seg_bits, seg.cfg, pulses), seg.start_time, 1.0});
  }

  BlockOutcome out;
  if (const auto* two = std::get_if<scenario::TwoUser>(&cfg.scenario)) {
    LinkConfig other = cfg.link;
    other.code = two->code2;
    ChannelRealization h2 = h;
    if (std::holds_alternative<MultipathSV>(cfg.channel)) {
      h2 = block_channel(cfg, substream(channel_seed(cfg, block), kUser2Channel));
    }
    const Bits bits2 = random_bits(total, substream(trial, kUser2Bits));
    users.push_back({modulate(bits2, other, through_channel(other, h2)), two->delay2, two->gain2});
  }
  if (reconf && reconf->interferer_code) {
    LinkConfig other = cfg.link;
    other.code = *reconf->interferer_code;
    if (reconf->interferer_gain != 0.0) {
      const Bits bits2 = random_bits(total, substream(trial, kInterfererBits));
      users.push_back({modulate(bits2, other, through_channel(other, h)), 0.0, reconf->interferer_gain});
    }
    for (std::size_t f = P; f < total; ++f) {
      const LinkConfig& active = f < frames_a ? cfg.link : cfg_b;
      if (active.code.at(f) != other.code.at(f)) continue;
      (f < frames_a ? out.collisions1 : out.collisions2) += 1;
    }
  }

  SampledWaveform rx = superpose(users);
  if (adds_noise(cfg)) {
    const double att = propagation_of(cfg).attenuation;
    const double eb = average_bit_energy(cfg.link) * att * att;
    rx = apply_awgn(rx, eb, ebn0_db, substream(trial, kNoise));
  }

  const auto tally = [&](std::size_t stream_frame, bool error) {
    const std::size_t g = payload_first + (stream_frame - P);
    const bool second = g >= sw;
    (second ? out.bits2 : out.bits1) += 1;
    if (!error) return;
    (second ? out.errors2 : out.errors1) += 1;
    if (sw != kNoSwitch && (g + 1 == sw || g == sw)) ++out.boundary_errors;
  };

  const Segment& first = segments.front();
  const double window =
      cfg.sync_search_window > 0.0 ? cfg.sync_search_window : first.cfg.timing.frame_duration();
  SyncState sync = search_sync(rx, first.cfg, preamble, window);
  if (!sync.locked) {
    out.sync_failed = true;
    for (std::size_t f = P; f < total; ++f) tally(f, true);
    return out;
  }
  sync.offset += cfg.forced_sync_error;

  double threshold = 0.0;
  const double gain_a = cfg.link.tx_gain;
  for (const auto& seg : segments) {
    SyncState s = sync;
    s.offset += seg.start_time;
    const auto stats = demodulate(rx, seg.cfg, s, seg.frames);
    if (&seg == &first && !uses_sign_decision(seg.cfg.scheme)) {
      threshold = train_threshold(std::span(stats).first(P), preamble);
    }
    double seg_threshold = threshold;
    if (seg.cfg.tx_gain != gain_a) {
      const double r = seg.cfg.tx_gain / gain_a;
      seg_threshold *= scheme_kind(seg.cfg.scheme) == SchemeKind::Ook ? r * r : r;
    }
    const Bits decided = decide(stats, seg.cfg.scheme, seg_threshold);
    for (std::size_t i = 0; i < seg.frames; ++i) {
      const std::size_t f = seg.first + i;
      if (f < P) continue;
      tally(f, decided[i] != bits[f]);
    }
  }
  return out;
}

struct PointTotals {
  BlockOutcome sum;
  std::size_t sync_failures = 0;
};

PointTotals run_blocks(const ExperimentConfig& cfg, double ebn0_db, const RunOptions& opts,
                       std::size_t point_index) {
  validate(cfg);
  LinkConfig cfg_b = cfg.link;
  if (const auto* r = std::get_if<scenario::Reconfigure>(&cfg.scenario)) cfg_b = reconfigure(cfg.link, r->patch);

  const std::size_t nblocks = (cfg.bits_per_point + cfg.block_bits - 1) / cfg.block_bits;
  std::vector<BlockOutcome> outcomes(nblocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      const std::size_t first = b * cfg.block_bits;
      const std::size_t n = std::min(cfg.block_bits, cfg.bits_per_point - first);
      try {
        outcomes[b] = run_block(cfg, cfg_b, ebn0_db, point_index, b, first, n);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = nblocks;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(nblocks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  PointTotals totals;
  for (const auto& o : outcomes) {
    totals.sum.errors1 += o.errors1;
    totals.sum.bits1 += o.bits1;
    totals.sum.errors2 += o.errors2;
    totals.sum.bits2 += o.bits2;
    totals.sum.boundary_errors += o.boundary_errors;
    totals.sum.collisions1 += o.collisions1;
    totals.sum.collisions2 += o.collisions2;
    totals.sync_failures += o.sync_failed ? 1 : 0;
  }
  return totals;
}

double log_ber(const BerPoint& p) {
  const double floor = p.trials > 0 ? 0.5 / static_cast<double>(p.trials) : 1e-300;
  return std::log10(std::max(p.ber, floor));
}

}  // namespace

Bits preamble_bits(std::size_t frames) {
  Bits bits(frames);
  for (std::size_t i = 0; i < frames; ++i) bits[i] = (i % 2 == 0) ? 1 : 0;
  return bits;
}

std::string channel_name(const ChannelModel& ch) {
  return std::visit(overloaded{
                        [](const PerfectChannel&) { return std::string("perfect"); },
                        [](const AwgnChannel&) { return std::string("awgn"); },
                        [](const MultipathSV&) { return std::string("sv"); },
                    },
                    ch);
}

void validate(const ExperimentConfig& cfg) {
  const auto invalid = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  validate(cfg.link);
  if (cfg.ebn0_grid.empty()) invalid("ebn0 grid is empty");
  for (std::size_t i = 0; i < cfg.ebn0_grid.size(); ++i) {
    if (!std::isfinite(cfg.ebn0_grid[i])) invalid("ebn0 grid values must be finite");
    if (i > 0 && !(cfg.ebn0_grid[i] > cfg.ebn0_grid[i - 1])) invalid("ebn0 grid must be strictly increasing");
  }
  if (cfg.bits_per_point < 1000) invalid("bits_per_point must be >= 1000");
  if (cfg.block_bits < 1) invalid("block_bits must be >= 1");
  if (!(cfg.sync_search_window >= 0.0)) invalid("sync search window must be >= 0");
  const PerfectChannel prop = propagation_of(cfg);
  if (!(prop.delay >= 0.0) || !(prop.attenuation > 0.0)) {
    invalid("channel delay must be >= 0 and attenuation > 0");
  }
  if (const auto* sv = std::get_if<MultipathSV>(&cfg.channel)) {
    if (!(sv->cluster_rate > 0.0 && sv->ray_rate > 0.0 && sv->cluster_decay > 0.0 && sv->ray_decay > 0.0 &&
          sv->max_delay_spread > 0.0)) {
      invalid("SV rates, decays and max_delay_spread must be > 0");
    }
  }
  if (const auto* two = std::get_if<scenario::TwoUser>(&cfg.scenario)) {
    if (two->code2.chips_per_frame != cfg.link.timing.chips_per_frame || two->code2.period() == 0) {
      invalid("second user's TH code must be non-empty and share Nc");
    }
  }
  if (const auto* r = std::get_if<scenario::Reconfigure>(&cfg.scenario)) {
    reconfigure(cfg.link, r->patch);
    if (r->interferer_code && r->interferer_code->chips_per_frame != cfg.link.timing.chips_per_frame) {
      invalid("interferer TH code must share Nc");
    }
  }
}

BerPoint make_point(double ebn0_db, std::size_t errors, std::size_t trials, std::size_t sync_failures) {
  BerPoint p;
  p.ebn0_db = ebn0_db;
  p.errors = errors;
  p.trials = trials;
  p.ber = trials > 0 ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
  p.ci95 = ber_interval(errors, trials);
  p.sync_failures = sync_failures;
  return p;
}

BerPoint run_ber_point(const ExperimentConfig& cfg, double ebn0_db, const RunOptions& opts,
                       std::size_t point_index) {
  const PointTotals t = run_blocks(cfg, ebn0_db, opts, point_index);
  return make_point(ebn0_db, t.sum.errors1 + t.sum.errors2, t.sum.bits1 + t.sum.bits2, t.sync_failures);
}

BerCurve sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  BerCurve curve;
  curve.scheme = scheme_name(cfg.link.scheme);
  curve.channel = channel_name(cfg.channel);
  for (std::size_t i = 0; i < cfg.ebn0_grid.size(); ++i) {
    curve.points.push_back(run_ber_point(cfg, cfg.ebn0_grid[i], opts, i));
  }
  return curve;
}

BerCurve analytic_curve(AnalyticScheme scheme, const std::vector<double>& grid) {
  BerCurve c;
  switch (scheme) {
    case AnalyticScheme::AntipodalCoherent: c.scheme = "antipodal"; break;
    case AnalyticScheme::OrthogonalCoherent: c.scheme = "orthogonal"; break;
    case AnalyticScheme::OokNoncoherent: c.scheme = "ook-noncoherent"; break;
  }
  c.channel = "analytic";
  for (double x : grid) {
    BerPoint p;
    p.ebn0_db = x;
    p.ber = analytic_ber(scheme, x);
    c.points.push_back(p);
  }
  return c;
}

double ebn0_at_ber(const BerCurve& curve, double target_ber) {
  if (!(target_ber > 0.0)) throw Error(ErrorCode::TargetNotBracketed, "target BER must be positive");
  const double y = std::log10(target_ber);
  const auto& pts = curve.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double y0 = log_ber(pts[i]);
    const double y1 = log_ber(pts[i + 1]);
    if (y0 >= y && y1 <= y) {
      if (y0 == y1) return pts[i].ebn0_db;
      const double frac = (y0 - y) / (y0 - y1);
      return pts[i].ebn0_db + frac * (pts[i + 1].ebn0_db - pts[i].ebn0_db);
    }
  }
  throw Error(ErrorCode::TargetNotBracketed, curve.scheme + " curve does not cross the target BER");
}

double gap_at_ber(const BerCurve& a, const BerCurve& b, double target_ber) {
  return ebn0_at_ber(b, target_ber) - ebn0_at_ber(a, target_ber);
}

ReconfigurationReport run_reconfiguration_scenario(const ExperimentConfig& cfg, double ebn0_db,
                                                   const RunOptions& opts) {
  const auto* r = std::get_if<scenario::Reconfigure>(&cfg.scenario);
  if (!r) throw Error(ErrorCode::InvalidConfig, "reconfiguration scenario requires scenario = reconfigure");
  const PointTotals t = run_blocks(cfg, ebn0_db, opts, 0);
  ReconfigurationReport rep;
  rep.segment1 = make_point(ebn0_db, t.sum.errors1, t.sum.bits1);
  rep.segment2 = make_point(ebn0_db, t.sum.errors2, t.sum.bits2);
  rep.boundary_errors = t.sum.boundary_errors;
  rep.collisions1 = t.sum.collisions1;
  rep.frames1 = t.sum.bits1;
  rep.collisions2 = t.sum.collisions2;
  rep.frames2 = t.sum.bits2;
  rep.sync_failures = t.sync_failures;
  return rep;
}

void write_ber_csv(std::ostream& os, const BerCurve& curve, bool header) {
  if (header) os << "scheme,channel,ebn0_db,trials,errors,ber,ci_low,ci_high,sync_failures\n";
  char line[256];
  for (const auto& p : curve.points) {
    std::snprintf(line, sizeof line, "%s,%s,%.9g,%zu,%zu,%.9g,%.9g,%.9g,%zu\n", curve.scheme.c_str(),
                  curve.channel.c_str(), p.ebn0_db, p.trials, p.errors, p.ber, p.ci95.low, p.ci95.high,
                  p.sync_failures);
    os << line;
  }
}

void write_run_metadata(std::ostream& os, const ExperimentConfig& cfg) {
  const LinkConfig& l = cfg.link;
  char buf[160];
  os << "scheme=" << scheme_name(l.scheme) << '\n';
  os << "channel=" << channel_name(cfg.channel) << '\n';
  os << "eb_convention=average transmitted energy per bit over equiprobable bits\n";
  std::snprintf(buf, sizeof buf, "eb_joules_equivalent=%.9g\n", average_bit_energy(l));
  os << buf;
  std::snprintf(buf, sizeof buf, "pulse=gaussian_monocycle order=%d tau_s=%.9g amplitude=%.9g\n", l.pulse.order,
                l.pulse.tau, l.pulse.amplitude);
  os << buf;
  std::snprintf(buf, sizeof buf, "pulse_minus10db_duration_s=%.9g\n",
                minus10db_duration(render_pulse(l.pulse, l.sample_rate)));
  os << buf;
  if (const auto* b = std::get_if<scheme::Bpam>(&l.scheme)) {
    std::snprintf(buf, sizeof buf, "bpam_amplitudes=A1:%.9g,A0:%.9g\n", b->a1, b->a0);
    os << buf;
  }
  if (std::holds_alternative<scheme::Psm>(l.scheme)) {
    const auto set = make_pulse_set(l);
    std::snprintf(buf, sizeof buf, "psm_cross_correlation=%.9g\n", cross_correlation(set.pulses[0], set.pulses[1]));
    os << buf;
  }
  if (std::holds_alternative<MultipathSV>(cfg.channel)) {
    os << "multipath_template=clean transmitted pulse (no rake); results are a lower bound\n";
  }
  os << "preamble_frames=" << kPreambleFrames << " (excluded from BER)\n";
  os << "seed_rule=splitmix64(splitmix64(splitmix64(master) ^ point) ^ block)\n";
  os << "master_seed=" << cfg.master_seed << '\n';
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_name) {
  os << "set datafile separator ','\n"
        "set logscale y\n"
        "set grid\n"
        "set xlabel 'Eb/N0 (dB)'\n"
        "set ylabel 'BER'\n"
        "set key autotitle columnhead\n"
        "plot '"
     << csv_name << "' using 3:6:7:8 with yerrorlines title 'simulated'\n";
}

}  // namespace uwb
