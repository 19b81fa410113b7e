#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uwb/channel.hpp"
#include "uwb/stats.hpp"
#include "uwb/transmitter.hpp"

namespace uwb {

inline constexpr std::size_t kPreambleFrames = 32;

/// Known preamble 1,0,1,0,... used for sync and threshold training.
Bits preamble_bits(std::size_t frames = kPreambleFrames);

namespace scenario {
struct SingleUser {};

/// Second user on code2, delayed and scaled, sharing the channel type.
struct TwoUser {
  ThCode code2;
  double delay2 = 0.0;
  double gain2 = 1.0;
};

/// Both ends apply `patch` from payload frame switch_frame onwards. The
/// interferer, if present, keeps transmitting on its own code throughout.
struct Reconfigure {
  LinkPatch patch;
  std::size_t switch_frame = 0;
  std::optional<ThCode> interferer_code;
  double interferer_gain = 0.0;
};
}  // namespace scenario

using Scenario = std::variant<scenario::SingleUser, scenario::TwoUser, scenario::Reconfigure>;

struct PsdOptions {
  std::size_t segment_len = 16384;
  std::size_t frames = 10000;
};

struct ExperimentConfig {
  LinkConfig link = default_link();
  /// Perfect: noiseless with its own delay/attenuation. Awgn and MultipathSV
  /// add noise at each grid point and use `propagation` for delay/loss.
  ChannelModel channel = AwgnChannel{};
  PerfectChannel propagation;
  bool multipath_awgn = true;
  std::vector<double> ebn0_grid{0.0, 2.0, 4.0, 6.0, 8.0};
  std::size_t bits_per_point = 10000;
  std::size_t block_bits = 1000;
  std::uint64_t master_seed = 1;
  double sync_search_window = 0.0;  // s; 0 means one frame
  double forced_sync_error = 0.0;   // s added to the acquired offset
  Scenario scenario = scenario::SingleUser{};
  PsdOptions psd;
};

/// Throws InvalidConfig on the first violated invariant.
void validate(const ExperimentConfig& cfg);

std::string channel_name(const ChannelModel& ch);

struct RunOptions {
  unsigned threads = 1;
};

struct BerPoint {
  double ebn0_db = 0.0;
  std::size_t errors = 0;
  std::size_t trials = 0;
  double ber = 0.0;
  Interval ci95;
  std::size_t sync_failures = 0;
};

struct BerCurve {
  std::string scheme;
  std::string channel;
  std::vector<BerPoint> points;
};

BerPoint make_point(double ebn0_db, std::size_t errors, std::size_t trials, std::size_t sync_failures = 0);

/// Monte-Carlo BER at one Eb/N0. Trials are blocks of block_bits payload
/// bits behind a 32-frame preamble; block k of grid point p is seeded with
/// derive_seed(master_seed, p, k). A block whose sync fails counts all its
/// payload bits as errors. Output is independent of opts.threads.
BerPoint run_ber_point(const ExperimentConfig& cfg, double ebn0_db, const RunOptions& opts = {},
                       std::size_t point_index = 0);

/// One BerPoint per grid value, in grid order.
BerCurve sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Closed-form curve on a grid (trials = 0).
BerCurve analytic_curve(AnalyticScheme scheme, const std::vector<double>& grid);

/// Eb/N0 at which curve B reaches target minus where curve A does, using
/// log-linear interpolation at each curve's first crossing. Positive means
/// A needs less energy. Zero-error points are floored at half an error.
double gap_at_ber(const BerCurve& a, const BerCurve& b, double target_ber);

/// Eb/N0 where a curve first crosses target_ber; throws TargetNotBracketed.
double ebn0_at_ber(const BerCurve& curve, double target_ber);

struct ReconfigurationReport {
  BerPoint segment1;
  BerPoint segment2;
  std::size_t boundary_errors = 0;  // errors in the two frames adjacent to the switch
  std::size_t collisions1 = 0;
  std::size_t frames1 = 0;
  std::size_t collisions2 = 0;
  std::size_t frames2 = 0;
  std::size_t sync_failures = 0;
};

/// Requires a scenario::Reconfigure config; runs bits_per_point payload bits.
ReconfigurationReport run_reconfiguration_scenario(const ExperimentConfig& cfg, double ebn0_db,
                                                   const RunOptions& opts = {});

/// CSV header scheme,channel,ebn0_db,trials,errors,ber,ci_low,ci_high,sync_failures.
void write_ber_csv(std::ostream& os, const BerCurve& curve, bool header = true);

/// Run metadata (Eb convention, pulse, amplitudes) as key=value lines.
void write_run_metadata(std::ostream& os, const ExperimentConfig& cfg);

/// gnuplot script plotting ber.csv on a log axis.
void write_gnuplot_script(std::ostream& os, const std::string& csv_name);

}  // namespace uwb
