#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uwb {

/// Frame/chip layout of a time-hopping link: a frame holds chips_per_frame
/// chips of chip_duration each; a PPM "1" shifts the pulse by ppm_shift
/// inside its chip.
struct FrameTiming {
  double chip_duration = 4e-9;  // Tc, s
  int chips_per_frame = 8;      // Nc
  double ppm_shift = 0.8e-9;    // s

  double frame_duration() const noexcept { return chips_per_frame * chip_duration; }

  friend bool operator==(const FrameTiming&, const FrameTiming&) = default;
};

/// FrameTiming quantized to a sample grid. Pulses start at
/// frame * frame + chip_index * chip + bit * ppm.
struct SampleTiming {
  std::size_t chip = 0;
  std::size_t frame = 0;
  std::size_t ppm = 0;
};

SampleTiming to_samples(const FrameTiming& timing, double sample_rate);

/// Throws InvalidParameter unless the timing is well-formed and a pulse of
/// pulse_support seconds shifted by ppm_shift still fits inside one chip.
void check_timing(const FrameTiming& timing, double pulse_support, double sample_rate);

/// Periodic chip-index sequence; frame k uses chips[k % period()].
struct ThCode {
  std::vector<int> chips;
  int chips_per_frame = 1;
  std::uint64_t seed = 0;

  std::size_t period() const noexcept { return chips.size(); }
  int at(std::size_t frame) const { return chips[frame % chips.size()]; }

  friend bool operator==(const ThCode&, const ThCode&) = default;
};

/// Uniform i.i.d. chip indices in [0, Nc), deterministic in (seed, period, Nc).
ThCode generate_th_code(std::uint64_t seed, int period, int chips_per_frame);

/// Wraps an explicit chip list; throws InvalidParameter on out-of-range indices.
ThCode make_th_code(std::vector<int> chips, int chips_per_frame);

/// Same code with its phase advanced so that frame 0 uses chips[first_frame % period].
ThCode shifted_code(const ThCode& code, std::size_t first_frame);

/// frame_index * Tf + code[frame_index mod period] * Tc + ppm_offset.
double pulse_instant(std::size_t frame_index, const ThCode& code, const FrameTiming& timing,
                     double ppm_offset = 0.0);

/// Frames in [0, frames) in which both codes select the same chip.
std::size_t collision_count(const ThCode& a, const ThCode& b, std::size_t frames);

}  // namespace uwb
