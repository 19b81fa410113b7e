#pragma once

#include <cstddef>
#include <cstdint>

namespace uwb {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

double db_to_linear(double db);

enum class AnalyticScheme { AntipodalCoherent, OrthogonalCoherent, OokNoncoherent };

/// Closed-form BER with r = 10^(ebn0_db / 10):
///   antipodal Q(sqrt(2r)), orthogonal Q(sqrt(r)), OOK non-coherent exp(-r/4) / 2.
double analytic_ber(AnalyticScheme scheme, double ebn0_db);

struct Interval {
  double low = 0.0;
  double high = 1.0;
  bool contains(double p) const noexcept { return p >= low && p <= high; }
};

/// Wilson score interval for `errors` successes in `trials`.
Interval wilson_interval(std::size_t errors, std::size_t trials, double z);

/// Interval reported for a BER point: Wilson at 95 %, except that a point
/// with zero errors gets the one-sided 95 % bound [0, 1 - 0.05^(1/n)].
Interval ber_interval(std::size_t errors, std::size_t trials);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stateless seed derivation: mix64 chained over (master, point, trial).
/// Distinct (point, trial) pairs give unrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

}  // namespace uwb
