#include "uwb/transmitter.hpp"

#include <algorithm>
#include <cmath>

#include "uwb/error.hpp"

namespace uwb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// How one bit is put on air: which pulse, its amplitude, and whether it is
// moved by the PPM shift.
struct Symbol {
  std::size_t pulse = 0;
  double amplitude = 0.0;
  bool shifted = false;
};

Symbol symbol_for(const ModulationScheme& s, std::uint8_t bit) {
  const bool one = bit != 0;
  return std::visit(
      overloaded{
          [&](const scheme::Ppm&) { return Symbol{0, 1.0, one}; },
          [&](const scheme::Ook& m) { return Symbol{0, one ? m.a1 : 0.0, false}; },
          [&](const scheme::Bpam& m) { return Symbol{0, one ? m.a1 : m.a0, false}; },
          [&](const scheme::BiPhase& m) { return Symbol{0, one ? m.a : -m.a, false}; },
          [&](const scheme::Psm&) { return Symbol{one ? 1u : 0u, 1.0, false}; },
      },
      s);
}

std::vector<PulseShape> pulse_shapes(const LinkConfig& cfg) {
  if (const auto* psm = std::get_if<scheme::Psm>(&cfg.scheme)) {
    return {psm->shape0, psm->shape1};
  }
  return {cfg.pulse};
}

// Pads w symmetrically to `length` samples (length - w.size() is even).
SampledWaveform pad_centered(SampledWaveform w, std::size_t length) {
  const std::size_t extra = (length - w.size()) / 2;
  w.samples.insert(w.samples.begin(), extra, 0.0);
  w.samples.resize(length, 0.0);
  w.start_time -= static_cast<double>(extra) / w.sample_rate;
  return w;
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

}  // namespace

SchemeKind scheme_kind(const ModulationScheme& s) {
  return static_cast<SchemeKind>(s.index());
}

std::string scheme_name(const ModulationScheme& s) {
  return std::visit(overloaded{
                        [](const scheme::Ppm&) { return std::string("TH-PPM"); },
                        [](const scheme::Ook&) { return std::string("TH-OOK"); },
                        [](const scheme::Bpam&) { return std::string("TH-BPAM"); },
                        [](const scheme::BiPhase&) { return std::string("TH-BiPhase"); },
                        [](const scheme::Psm&) { return std::string("TH-PSM"); },
                    },
                    s);
}

bool uses_sign_decision(const ModulationScheme& s) {
  if (std::holds_alternative<scheme::Ook>(s)) return false;
  if (const auto* b = std::get_if<scheme::Bpam>(&s)) return b->a0 == -b->a1;
  return true;
}

LinkConfig default_link(ModulationScheme s, std::uint64_t th_seed) {
  LinkConfig cfg;
  cfg.pulse = PulseShape{PulseFamily::GaussianMonocycle, 1, 0.2e-9, 1.0};
  cfg.sample_rate = kDefaultSampleRate;
  cfg.timing = FrameTiming{4e-9, 8, 4.0 * cfg.pulse.tau};
  cfg.code = generate_th_code(th_seed, 1024, cfg.timing.chips_per_frame);
  cfg.tx_gain = 1.0;
  if (auto* ppm = std::get_if<scheme::Ppm>(&s)) ppm->delta = cfg.timing.ppm_shift;
  if (auto* psm = std::get_if<scheme::Psm>(&s)) {
    psm->shape0.tau = cfg.pulse.tau;
    psm->shape1.tau = cfg.pulse.tau;
  }
  cfg.scheme = s;
  return cfg;
}

PulseSet make_pulse_set(const LinkConfig& cfg) {
  PulseSet set;
  std::size_t length = 0;
  for (const auto& shape : pulse_shapes(cfg)) {
    set.pulses.push_back(render_pulse(shape, cfg.sample_rate));
    length = std::max(length, set.pulses.back().size());
  }
  for (auto& p : set.pulses) p = pad_centered(std::move(p), length);
  return set;
}

void validate(const LinkConfig& cfg) {
  if (!(cfg.sample_rate > 0.0) || !std::isfinite(cfg.sample_rate)) {
    invalid("sample_rate must be positive");
  }
  if (!(cfg.tx_gain > 0.0) || !std::isfinite(cfg.tx_gain)) invalid("tx_gain must be positive");

  PulseSet pulses;
  try {
    pulses = make_pulse_set(cfg);
    double support = 0.0;
    for (const auto& shape : pulse_shapes(cfg)) support = std::max(support, shape.support());
    check_timing(cfg.timing, support, cfg.sample_rate);
  } catch (const Error& e) {
    invalid(e.what());
  }

  if (cfg.code.period() == 0) invalid("TH code is empty");
  if (cfg.code.chips_per_frame != cfg.timing.chips_per_frame) {
    invalid("TH code Nc does not match the frame timing");
  }
  for (int c : cfg.code.chips) {
    if (c < 0 || c >= cfg.timing.chips_per_frame) invalid("TH chip index outside [0, Nc)");
  }

  std::visit(overloaded{
                 [&](const scheme::Ppm& m) {
                   if (std::abs(m.delta - cfg.timing.ppm_shift) > 1e-15) {
                     invalid("PPM delta must equal the frame timing ppm_shift");
                   }
                 },
                 [&](const scheme::Ook& m) {
                   if (m.a1 == 0.0) invalid("OOK needs a nonzero A1");
                 },
                 [&](const scheme::Bpam& m) {
                   if (m.a1 == m.a0) invalid("BPAM needs A1 != A0");
                 },
                 [&](const scheme::BiPhase& m) {
                   if (m.a == 0.0) invalid("BiPhase needs a nonzero amplitude");
                 },
                 [&](const scheme::Psm&) {
                   const double rho = cross_correlation(pulses.pulses[0], pulses.pulses[1]);
                   if (std::abs(rho) >= 0.9) invalid("PSM shapes are not distinguishable (|rho| >= 0.9)");
                 },
             },
             cfg.scheme);
}

double symbol_energy(const LinkConfig& cfg, std::uint8_t bit) {
  const auto pulses = make_pulse_set(cfg);
  const Symbol sym = symbol_for(cfg.scheme, bit);
  const double a = sym.amplitude * cfg.tx_gain;
  return a * a * pulses.pulses[sym.pulse].energy();
}

double average_bit_energy(const LinkConfig& cfg) {
  return 0.5 * (symbol_energy(cfg, 0) + symbol_energy(cfg, 1));
}

SampledWaveform modulate(std::span<const std::uint8_t> bits, const LinkConfig& cfg,
                         std::size_t first_frame) {
  validate(cfg);
  return modulate(bits, cfg, make_pulse_set(cfg), first_frame);
}

SampledWaveform modulate(std::span<const std::uint8_t> bits, const LinkConfig& cfg,
                         const PulseSet& pulses, std::size_t first_frame) {
  if (bits.empty()) throw Error(ErrorCode::InvalidConfig, "cannot modulate an empty bit sequence");
  const SampleTiming st = to_samples(cfg.timing, cfg.sample_rate);
  const std::size_t plen = pulses.length();

  const std::size_t nominal = bits.size() * st.frame;
  const std::size_t last_start = (bits.size() - 1) * st.frame +
                                 (st.chip * static_cast<std::size_t>(cfg.timing.chips_per_frame - 1)) +
                                 st.ppm;
  SampledWaveform out;
  out.sample_rate = cfg.sample_rate;
  out.start_time = 0.0;
  out.samples.assign(std::max(nominal, last_start + plen), 0.0);

  for (std::size_t k = 0; k < bits.size(); ++k) {
    const Symbol sym = symbol_for(cfg.scheme, bits[k]);
    const double a = sym.amplitude * cfg.tx_gain;
    if (a == 0.0) continue;
    const std::size_t start = k * st.frame +
                              static_cast<std::size_t>(cfg.code.at(first_frame + k)) * st.chip +
                              (sym.shifted ? st.ppm : 0);
    const auto& p = pulses.pulses[sym.pulse].samples;
    double* dst = out.samples.data() + start;
    for (std::size_t i = 0; i < plen; ++i) dst[i] += a * p[i];
  }
  if (nominal >= last_start + plen) out.samples.resize(nominal);
  return out;
}

SampledWaveform superpose(std::span<const UserSignal> users) {
  if (users.empty()) throw Error(ErrorCode::InvalidParameter, "superpose needs at least one user");
  const double fs = users.front().signal.sample_rate;
  long long lo = 0;
  long long hi = 0;
  bool first = true;
  for (const auto& u : users) {
    if (u.signal.sample_rate != fs) {
      throw Error(ErrorCode::SampleRateMismatch, "superposed signals must share sample_rate");
    }
    const long long s = std::llround((u.signal.start_time + u.delay) * fs);
    const long long e = s + static_cast<long long>(u.signal.size());
    lo = first ? s : std::min(lo, s);
    hi = first ? e : std::max(hi, e);
    first = false;
  }
  SampledWaveform out;
  out.sample_rate = fs;
  out.start_time = static_cast<double>(lo) / fs;
  out.samples.assign(static_cast<std::size_t>(hi - lo), 0.0);
  for (const auto& u : users) {
    const long long s = std::llround((u.signal.start_time + u.delay) * fs) - lo;
    double* dst = out.samples.data() + s;
    for (std::size_t i = 0; i < u.signal.size(); ++i) dst[i] += u.gain * u.signal.samples[i];
  }
  return out;
}

LinkConfig reconfigure(const LinkConfig& cfg, const LinkPatch& patch) {
  LinkConfig out = cfg;
  if (patch.timing) {
    out.timing = *patch.timing;
    if (auto* ppm = std::get_if<scheme::Ppm>(&out.scheme)) ppm->delta = out.timing.ppm_shift;
  }
  if (patch.tau) {
    out.pulse.tau = *patch.tau;
    if (auto* psm = std::get_if<scheme::Psm>(&out.scheme)) {
      psm->shape0.tau = *patch.tau;
      psm->shape1.tau = *patch.tau;
    }
  }
  if (patch.tx_gain) out.tx_gain = *patch.tx_gain;
  if (patch.code) out.code = *patch.code;
  validate(out);
  return out;
}

}  // namespace uwb
