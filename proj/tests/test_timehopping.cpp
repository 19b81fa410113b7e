#include <doctest.h>

#include <array>
#include <cmath>

#include "uwb/error.hpp"
#include "uwb/timehopping.hpp"

using namespace uwb;

TEST_CASE("generate_th_code: Nc = 1 forces chip 0") {
  const auto c = generate_th_code(7, 64, 1);
  CHECK(c.period() == 64);
  for (int chip : c.chips) CHECK(chip == 0);
}

TEST_CASE("generate_th_code: deterministic in (seed, period, Nc)") {
  CHECK(generate_th_code(42, 500, 8) == generate_th_code(42, 500, 8));
  CHECK_FALSE(generate_th_code(42, 500, 8).chips == generate_th_code(43, 500, 8).chips);
}

TEST_CASE("generate_th_code: uniform chip frequencies for Nc = 8") {
  const auto c = generate_th_code(3, 100000, 8);
  std::array<int, 8> counts{};
  for (int chip : c.chips) {
    REQUIRE(chip >= 0);
    REQUIRE(chip < 8);
    ++counts[static_cast<std::size_t>(chip)];
  }
  for (int n : counts) {
    const double f = n / 100000.0;
    CHECK(f >= 0.115);
    CHECK(f <= 0.135);
  }
}

TEST_CASE("generate_th_code and make_th_code: parameter checks") {
  CHECK_THROWS_AS(generate_th_code(1, 0, 8), Error);
  CHECK_THROWS_AS(generate_th_code(1, 8, 0), Error);
  CHECK_THROWS_AS(make_th_code({0, 8}, 8), Error);
  CHECK_THROWS_AS(make_th_code({-1}, 8), Error);
  CHECK_THROWS_AS(make_th_code({}, 8), Error);
  CHECK(make_th_code({1, 7}, 8).at(3) == 7);
}

TEST_CASE("pulse_instant: placement arithmetic") {
  FrameTiming t{2e-9, 5, 0.5e-9};  // Tf = 10 ns
  const auto code = make_th_code({0, 4, 3, 1}, 5);
  CHECK(pulse_instant(0, code, t) == 0.0);
  CHECK(pulse_instant(2, code, t) == doctest::Approx(26e-9));
  CHECK(pulse_instant(2, code, t, 0.5e-9) == doctest::Approx(26.5e-9));
  CHECK(pulse_instant(6, code, t) == doctest::Approx(66e-9));  // wraps to code[2]
}

TEST_CASE("property: pulse instants increase and stay inside their frame") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    FrameTiming t{4e-9, 8, 0.8e-9};
    const auto code = generate_th_code(seed, 257, 8);
    double prev = -1.0;
    for (std::size_t k = 0; k < 2000; ++k) {
      for (double off : {0.0, t.ppm_shift}) {
        const double x = pulse_instant(k, code, t, off);
        CHECK(x >= k * t.frame_duration());
        CHECK(x < (k + 1) * t.frame_duration());
      }
      const double x = pulse_instant(k, code, t);
      CHECK(x > prev);
      prev = x;
    }
  }
}

TEST_CASE("collision_count: identical, disjoint and independent codes") {
  const auto a = generate_th_code(11, 1000, 8);
  CHECK(collision_count(a, a, 100) == 100);
  CHECK(collision_count(make_th_code({0, 1}, 2), make_th_code({1, 0}, 2), 100) == 0);

  const auto x = generate_th_code(101, 100000, 8);
  const auto y = generate_th_code(202, 100000, 8);
  const double rate = collision_count(x, y, 100000) / 100000.0;
  CHECK(rate >= 0.115);
  CHECK(rate <= 0.135);
}

TEST_CASE("collision_count: mismatched Nc and symmetry") {
  CHECK_THROWS_AS(collision_count(generate_th_code(1, 10, 8), generate_th_code(1, 10, 4), 10), Error);
  try {
    collision_count(generate_th_code(1, 10, 8), generate_th_code(1, 10, 4), 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedNc);
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = generate_th_code(s, 37, 4);
    const auto b = generate_th_code(s + 100, 53, 4);
    CHECK(collision_count(a, b, 999) == collision_count(b, a, 999));
  }
}

TEST_CASE("shifted_code: rotation matches frame offset") {
  const auto c = generate_th_code(5, 19, 8);
  const auto s = shifted_code(c, 7);
  for (std::size_t k = 0; k < 50; ++k) CHECK(s.at(k) == c.at(k + 7));
}

TEST_CASE("check_timing: pulse and PPM shift must fit in a chip") {
  FrameTiming ok{4e-9, 8, 0.8e-9};
  CHECK_NOTHROW(check_timing(ok, 1.6e-9, 50e9));
  FrameTiming tight{2.4e-9, 8, 0.8e-9};  // 40 + 81 samples > 120
  CHECK_THROWS_AS(check_timing(tight, 1.6e-9, 50e9), Error);
  FrameTiming fits{2.42e-9, 8, 0.8e-9};
  CHECK_NOTHROW(check_timing(fits, 1.6e-9, 50e9));
  CHECK_THROWS_AS(check_timing(FrameTiming{4e-9, 0, 0.8e-9}, 1.6e-9, 50e9), Error);
  CHECK_THROWS_AS(check_timing(FrameTiming{4e-9, 8, 0.0}, 1.6e-9, 50e9), Error);
  const auto st = to_samples(ok, 50e9);
  CHECK(st.chip == 200);
  CHECK(st.frame == 1600);
  CHECK(st.ppm == 40);
}
