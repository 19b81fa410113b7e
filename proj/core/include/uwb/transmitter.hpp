#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uwb/timehopping.hpp"
#include "uwb/waveform.hpp"

namespace uwb {

using Bits = std::vector<std::uint8_t>;

namespace scheme {
struct Ppm {
  double delta = 0.8e-9;  // must equal FrameTiming::ppm_shift
  friend bool operator==(const Ppm&, const Ppm&) = default;
};
struct Ook {
  double a1 = 1.0;
  friend bool operator==(const Ook&, const Ook&) = default;
};
struct Bpam {
  double a1 = 1.0;
  double a0 = 0.5;
  friend bool operator==(const Bpam&, const Bpam&) = default;
};
struct BiPhase {
  double a = 1.0;
  friend bool operator==(const BiPhase&, const BiPhase&) = default;
};
struct Psm {
  PulseShape shape0{PulseFamily::GaussianMonocycle, 1};
  PulseShape shape1{PulseFamily::GaussianMonocycle, 2};
  friend bool operator==(const Psm&, const Psm&) = default;
};
}  // namespace scheme

using ModulationScheme =
    std::variant<scheme::Ppm, scheme::Ook, scheme::Bpam, scheme::BiPhase, scheme::Psm>;

enum class SchemeKind { Ppm, Ook, Bpam, BiPhase, Psm };

SchemeKind scheme_kind(const ModulationScheme& s);

/// "TH-PPM", "TH-OOK", ...
std::string scheme_name(const ModulationScheme& s);

/// True when the receiver slices on the sign of its statistic (PPM, BiPhase,
/// PSM, symmetric BPAM); false when it needs a trained threshold.
bool uses_sign_decision(const ModulationScheme& s);

struct LinkConfig {
  ModulationScheme scheme = scheme::Ppm{};
  FrameTiming timing;
  ThCode code;
  PulseShape pulse;
  double tx_gain = 1.0;  // amplitude scale; stands for radio range
  double sample_rate = kDefaultSampleRate;

  friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

/// Baseline link: tau = 0.2 ns monocycle at 50 GHz, Tc = 4 ns, Nc = 8,
/// PPM shift 4 tau, TH code of period 1024 drawn from th_seed.
LinkConfig default_link(ModulationScheme s = scheme::Ppm{}, std::uint64_t th_seed = 1);

/// Throws InvalidConfig describing the first violated invariant.
void validate(const LinkConfig& cfg);

/// Unit-energy transmit pulses for a link (two for PSM, otherwise one),
/// centre-aligned and padded to a common length.
struct PulseSet {
  std::vector<SampledWaveform> pulses;
  std::size_t length() const noexcept { return pulses.front().size(); }
};

PulseSet make_pulse_set(const LinkConfig& cfg);

/// Energy of the transmitted symbol for one bit value.
double symbol_energy(const LinkConfig& cfg, std::uint8_t bit);

/// Mean of the two symbol energies (Eb for equiprobable bits).
double average_bit_energy(const LinkConfig& cfg);

/// One frame per bit; frame k carries bit k at chip code[(first_frame + k) mod period].
/// Output spans bits.size() frames starting at t = 0.
SampledWaveform modulate(std::span<const std::uint8_t> bits, const LinkConfig& cfg,
                         std::size_t first_frame = 0);

/// Same mapping with caller-supplied pulses (for instance pulses already passed
/// through a channel). The output is extended when pulses overrun the last frame.
SampledWaveform modulate(std::span<const std::uint8_t> bits, const LinkConfig& cfg,
                         const PulseSet& pulses, std::size_t first_frame = 0);

struct UserSignal {
  SampledWaveform signal;
  double delay = 0.0;  // s, rounded to the nearest sample
  double gain = 1.0;
};

SampledWaveform superpose(std::span<const UserSignal> users);

/// Fields that may change at run time without rebuilding the link.
struct LinkPatch {
  std::optional<FrameTiming> timing;  // data rate
  std::optional<double> tau;          // spectrum occupation
  std::optional<double> tx_gain;      // radio range
  std::optional<ThCode> code;         // TH code

  bool empty() const noexcept { return !timing && !tau && !tx_gain && !code; }
};

LinkConfig reconfigure(const LinkConfig& cfg, const LinkPatch& patch);

}  // namespace uwb
