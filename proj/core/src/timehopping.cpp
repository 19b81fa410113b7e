#include "uwb/timehopping.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "uwb/error.hpp"

namespace uwb {

SampleTiming to_samples(const FrameTiming& timing, double sample_rate) {
  SampleTiming s;
  s.chip = static_cast<std::size_t>(std::llround(timing.chip_duration * sample_rate));
  s.frame = s.chip * static_cast<std::size_t>(timing.chips_per_frame);
  s.ppm = static_cast<std::size_t>(std::llround(timing.ppm_shift * sample_rate));
  return s;
}

void check_timing(const FrameTiming& timing, double pulse_support, double sample_rate) {
  if (timing.chips_per_frame < 1) {
    throw Error(ErrorCode::InvalidParameter, "chips_per_frame must be >= 1");
  }
  if (!(timing.chip_duration > 0.0) || !std::isfinite(timing.chip_duration)) {
    throw Error(ErrorCode::InvalidParameter, "chip_duration must be positive");
  }
  if (!(timing.ppm_shift > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "ppm_shift must be positive");
  }
  if (!(sample_rate > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "sample_rate must be positive");
  }
  // Checked on the sample grid so that the pulse provably stays inside its chip.
  const auto st = to_samples(timing, sample_rate);
  const auto support = static_cast<std::size_t>(std::floor(pulse_support * sample_rate + 1e-9)) + 1;
  if (st.ppm == 0 || st.ppm + support > st.chip) {
    throw Error(ErrorCode::InvalidParameter,
                "ppm_shift + pulse support (" + std::to_string(st.ppm + support) +
                    " samples) exceeds the chip (" + std::to_string(st.chip) + " samples)");
  }
}

ThCode generate_th_code(std::uint64_t seed, int period, int chips_per_frame) {
  if (period < 1 || chips_per_frame < 1) {
    throw Error(ErrorCode::InvalidParameter, "TH code period and Nc must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> chip(0, chips_per_frame - 1);
  ThCode code;
  code.chips_per_frame = chips_per_frame;
  code.seed = seed;
  code.chips.resize(static_cast<std::size_t>(period));
  for (int& c : code.chips) c = chip(rng);
  return code;
}

ThCode make_th_code(std::vector<int> chips, int chips_per_frame) {
  if (chips.empty() || chips_per_frame < 1) {
    throw Error(ErrorCode::InvalidParameter, "TH code needs period >= 1 and Nc >= 1");
  }
  for (int c : chips) {
    if (c < 0 || c >= chips_per_frame) {
      throw Error(ErrorCode::InvalidParameter,
                  "TH chip index " + std::to_string(c) + " outside [0, Nc)");
    }
  }
  ThCode code;
  code.chips = std::move(chips);
  code.chips_per_frame = chips_per_frame;
  return code;
}

ThCode shifted_code(const ThCode& code, std::size_t first_frame) {
  ThCode out = code;
  if (!code.chips.empty()) {
    const auto shift = static_cast<std::ptrdiff_t>(first_frame % code.period());
    std::rotate(out.chips.begin(), out.chips.begin() + shift, out.chips.end());
  }
  return out;
}

double pulse_instant(std::size_t frame_index, const ThCode& code, const FrameTiming& timing,
                     double ppm_offset) {
  return static_cast<double>(frame_index) * timing.frame_duration() +
         code.at(frame_index) * timing.chip_duration + ppm_offset;
}

std::size_t collision_count(const ThCode& a, const ThCode& b, std::size_t frames) {
  if (a.chips_per_frame != b.chips_per_frame) {
    throw Error(ErrorCode::MismatchedNc, "codes use different chips_per_frame");
  }
  if (frames < 1) {
    throw Error(ErrorCode::InvalidParameter, "frames must be >= 1");
  }
  std::size_t hits = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    if (a.at(k) == b.at(k)) ++hits;
  }
  return hits;
}

}  // namespace uwb
