#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "uwb/stats.hpp"

using namespace uwb;

TEST_CASE("q_function agrees with numerical integration") {
  for (double x : {0.0, 0.5, 1.0, 2.0, 3.0, 4.5}) {
    CHECK(q_function(x) == doctest::Approx(oracle::q_simpson(x)).epsilon(1e-8));
  }
  CHECK(q_function(0.0) == doctest::Approx(0.5));
}

TEST_CASE("analytic_ber: closed forms against the oracle") {
  for (double db : {0.0, 3.0, 6.0, 9.0}) {
    const double r = std::pow(10.0, db / 10.0);
    CHECK(analytic_ber(AnalyticScheme::AntipodalCoherent, db) ==
          doctest::Approx(oracle::q_simpson(std::sqrt(2.0 * r))).epsilon(1e-7));
    CHECK(analytic_ber(AnalyticScheme::OrthogonalCoherent, db) ==
          doctest::Approx(oracle::q_simpson(std::sqrt(r))).epsilon(1e-7));
    CHECK(analytic_ber(AnalyticScheme::OokNoncoherent, db) == doctest::Approx(0.5 * std::exp(-r / 4.0)));
  }
  // Antipodal signalling reaches 1e-5 near 9.6 dB.
  CHECK(analytic_ber(AnalyticScheme::AntipodalCoherent, 9.6) == doctest::Approx(1e-5).epsilon(0.05));
  // Orthogonal needs exactly 10 log10 2 dB more for the same BER.
  const double g = 10.0 * std::log10(2.0);
  for (double db : {2.0, 7.0}) {
    CHECK(analytic_ber(AnalyticScheme::OrthogonalCoherent, db + g) ==
          doctest::Approx(analytic_ber(AnalyticScheme::AntipodalCoherent, db)).epsilon(1e-12));
  }
}

TEST_CASE("db_to_linear") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-5));
}

TEST_CASE("wilson_interval: textbook value and bounds") {
  const auto w = wilson_interval(10, 100, kZ95);
  CHECK(w.low == doctest::Approx(0.05523).epsilon(1e-3));
  CHECK(w.high == doctest::Approx(0.17437).epsilon(1e-3));
  const auto all = wilson_interval(50, 50, kZ95);
  CHECK(all.high == doctest::Approx(1.0));
  CHECK(all.low > 0.9);
  CHECK(wilson_interval(0, 50, kZ95).low == 0.0);
}

TEST_CASE("ber_interval: zero errors give the one-sided bound") {
  const auto b = ber_interval(0, 1000);
  CHECK(b.low == 0.0);
  CHECK(b.high == doctest::Approx(1.0 - std::pow(0.05, 1.0 / 1000)));
  CHECK(b.high == doctest::Approx(3.0 / 1000).epsilon(0.01));
}

// 93 of 100 per batch, estimated over 10 batches to keep the check itself from flaking.
TEST_CASE("property: Wilson 95 % interval covers the true rate in at least 93 % of runs") {
  std::mt19937_64 rng(77);
  for (double p : {0.01, 0.1, 0.4}) {
    std::binomial_distribution<std::size_t> binom(2000, p);
    int covered = 0;
    for (int r = 0; r < 1000; ++r) covered += wilson_interval(binom(rng), 2000, kZ95).contains(p) ? 1 : 0;
    CHECK(covered >= 930);
  }
}

TEST_CASE("derive_seed: deterministic and distinct across points and trials") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t p = 0; p < 50; ++p)
    for (std::uint64_t t = 0; t < 200; ++t) seen.insert(derive_seed(9, p, t));
  CHECK(seen.size() == 50 * 200);
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}
