#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "uwb/transmitter.hpp"
#include "uwb/waveform.hpp"

namespace uwb {

/// One-sided power spectral density on [0, fs/2]; Σ density * bin_width
/// equals the mean-square value of the signal.
struct Spectrum {
  std::vector<double> freq;     // Hz
  std::vector<double> density;  // units^2 / Hz
  double bin_width = 0.0;       // Hz

  double total_power() const;
};

/// Averaged periodogram over half-overlapping rectangular segments.
/// Throws SignalTooShort unless the signal holds at least 2 segments.
Spectrum psd(const SampledWaveform& signal, std::size_t segment_len);

/// Drop of the peak-to-mean spectral density ratio from `no_th` to
/// `with_th`, in dB. Throws GridMismatch if the frequency grids differ.
double line_suppression(const Spectrum& no_th, const Spectrum& with_th);

/// Unmodulated train: one pulse per frame at the chip given by cfg.code.
SampledWaveform pulse_train(const LinkConfig& cfg, std::size_t frames);

/// CSV with header freq_hz,psd.
void write_psd_csv(std::ostream& os, const Spectrum& s);

}  // namespace uwb
