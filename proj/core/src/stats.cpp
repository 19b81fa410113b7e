#include "uwb/stats.hpp"

#include <algorithm>
#include <cmath>

namespace uwb {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double analytic_ber(AnalyticScheme scheme, double ebn0_db) {
  const double r = db_to_linear(ebn0_db);
  switch (scheme) {
    case AnalyticScheme::AntipodalCoherent: return q_function(std::sqrt(2.0 * r));
    case AnalyticScheme::OrthogonalCoherent: return q_function(std::sqrt(r));
    case AnalyticScheme::OokNoncoherent: return 0.5 * std::exp(-r / 4.0);
  }
  return 0.5;
}

Interval wilson_interval(std::size_t errors, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {errors == 0 ? 0.0 : std::max(0.0, centre - half), errors == trials ? 1.0 : std::min(1.0, centre + half)};
}

Interval ber_interval(std::size_t errors, std::size_t trials) {
  if (trials > 0 && errors == 0) {
    return {0.0, 1.0 - std::pow(0.05, 1.0 / static_cast<double>(trials))};
  }
  return wilson_interval(errors, trials, kZ95);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return mix64(mix64(mix64(master) ^ point) ^ trial);
}

}  // namespace uwb
