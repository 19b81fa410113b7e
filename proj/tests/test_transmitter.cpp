#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uwb/error.hpp"
#include "uwb/transmitter.hpp"

using namespace uwb;

namespace {

Bits random_bits(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  Bits b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1u);
  return b;
}

std::vector<ModulationScheme> all_schemes() {
  return {scheme::Ppm{}, scheme::Ook{}, scheme::Bpam{}, scheme::BiPhase{}, scheme::Psm{}};
}

}  // namespace

TEST_CASE("modulate: OOK zeros emit nothing") {
  const auto cfg = default_link(scheme::Ook{});
  const Bits zeros{0, 0, 0};
  const auto w = modulate(zeros, cfg);
  CHECK(w.size() == 3 * 1600);
  CHECK(w.energy() == 0.0);
}

TEST_CASE("modulate: BiPhase bits 0 and 1 are exact negations") {
  const auto cfg = default_link(scheme::BiPhase{});
  const Bits zero{0}, one{1};
  const auto w0 = modulate(zero, cfg);
  const auto w1 = modulate(one, cfg);
  REQUIRE(w0.size() == w1.size());
  for (std::size_t i = 0; i < w0.size(); ++i) CHECK(w0.samples[i] == -w1.samples[i]);
}

TEST_CASE("modulate: PPM bit 1 is bit 0 delayed by delta") {
  LinkConfig cfg = default_link(scheme::Ppm{});
  cfg.timing.ppm_shift = 0.5e-9;
  cfg.scheme = scheme::Ppm{0.5e-9};
  const Bits zero{0}, one{1};
  const auto w0 = modulate(zero, cfg);
  const auto w1 = modulate(one, cfg);
  const std::size_t d = 25;  // 0.5 ns at 50 GHz
  for (std::size_t i = 0; i < w0.size(); ++i) {
    const double delayed = i >= d ? w0.samples[i - d] : 0.0;
    CHECK(w1.samples[i] == delayed);
  }
}

TEST_CASE("modulate: pulse lands at the TH chip of its frame") {
  LinkConfig cfg = default_link(scheme::BiPhase{});
  cfg.code = make_th_code({3, 0, 7}, 8);
  const Bits bits{1, 1, 1};
  const auto w = modulate(bits, cfg);
  const std::size_t expected[] = {0 * 1600 + 3 * 200, 1 * 1600 + 0, 2 * 1600 + 7 * 200};
  for (std::size_t k = 0; k < 3; ++k) {
    double chip_energy = 0.0;
    for (std::size_t i = expected[k]; i < expected[k] + 200; ++i) chip_energy += w.samples[i] * w.samples[i];
    CHECK(chip_energy / cfg.sample_rate == doctest::Approx(1.0));
  }
}

TEST_CASE("modulate: first_frame continues the code phase") {
  const auto cfg = default_link(scheme::Ppm{});
  const Bits bits = random_bits(40, 1);
  const auto whole = modulate(bits, cfg);
  const auto tail = modulate(std::span(bits).subspan(25), cfg, 25);
  for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail.samples[i] == whole.samples[25 * 1600 + i]);
}

TEST_CASE("property: frame isolation") {
  for (const auto& s : all_schemes()) {
    const auto cfg = default_link(s, 4);
    Bits bits = random_bits(30, 2);
    const auto w = modulate(bits, cfg);
    // Each frame's samples depend only on that frame's bit.
    for (std::size_t f : {0u, 13u, 29u}) {
      Bits flipped = bits;
      flipped[f] ^= 1;
      const auto wf = modulate(flipped, cfg);
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i / 1600 == f) continue;
        CHECK(wf.samples[i] == w.samples[i]);
      }
    }
  }
}

TEST_CASE("property: energy contract for schemes with a pulse in every frame") {
  for (const auto& s : {ModulationScheme{scheme::Ppm{}}, ModulationScheme{scheme::BiPhase{0.7}},
                        ModulationScheme{scheme::Psm{}}, ModulationScheme{scheme::Bpam{1.0, 0.5}}}) {
    LinkConfig cfg = default_link(s, 9);
    cfg.tx_gain = 1.3;
    const Bits bits = random_bits(200, 3);
    double expected = 0.0;
    for (auto b : bits) expected += symbol_energy(cfg, b);
    const auto w = modulate(bits, cfg);
    CHECK(oracle::energy(w.samples, cfg.sample_rate) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("symbol energies: tx_gain squared for the one symbol") {
  LinkConfig cfg = default_link(scheme::Ook{});
  cfg.tx_gain = 2.0;
  CHECK(symbol_energy(cfg, 1) == doctest::Approx(4.0));
  CHECK(symbol_energy(cfg, 0) == 0.0);
  CHECK(average_bit_energy(cfg) == doctest::Approx(2.0));
  const auto bpam = default_link(scheme::Bpam{1.0, 0.5});
  CHECK(average_bit_energy(bpam) == doctest::Approx(0.625));
}

TEST_CASE("property: BiPhase antipodality for any bit") {
  const auto cfg = default_link(scheme::BiPhase{2.0}, 5);
  for (std::uint8_t b : {0, 1}) {
    const Bits x{b}, y{static_cast<std::uint8_t>(b ^ 1)};
    const auto wx = modulate(x, cfg);
    const auto wy = modulate(y, cfg);
    for (std::size_t i = 0; i < wx.size(); ++i) CHECK(wx.samples[i] + wy.samples[i] == 0.0);
  }
}

TEST_CASE("property: modulation is bit-exact under any partition into blocks") {
  for (const auto& s : all_schemes()) {
    const auto cfg = default_link(s, 6);
    const Bits bits = random_bits(97, 7);
    const auto whole = modulate(bits, cfg);
    std::vector<double> joined;
    for (std::size_t start = 0; start < bits.size(); start += 17) {
      const std::size_t n = std::min<std::size_t>(17, bits.size() - start);
      auto part = modulate(std::span(bits).subspan(start, n), cfg, start);
      part.samples.resize(n * 1600);
      joined.insert(joined.end(), part.samples.begin(), part.samples.end());
    }
    CHECK(joined == whole.samples);
  }
}

TEST_CASE("superpose: identity, cancellation and per-chip energy accounting") {
  const auto cfg = default_link(scheme::BiPhase{});
  const Bits bits = random_bits(20, 8);
  const auto w = modulate(bits, cfg);
  const std::vector<UserSignal> one{{w, 0.0, 1.0}};
  CHECK(superpose(one) == w);

  const std::vector<UserSignal> cancel{{w, 0.0, 1.0}, {w, 0.0, -1.0}};
  const auto z = superpose(cancel);
  for (double s : z.samples) CHECK(s == 0.0);

  LinkConfig a = cfg, b = cfg;
  a.code = make_th_code({0, 2, 5, 7}, 8);
  b.code = make_th_code({4, 6, 1, 3}, 8);
  const auto wa = modulate(bits, a);
  const auto wb = modulate(bits, b);
  const std::vector<UserSignal> both{{wa, 0.0, 1.0}, {wb, 0.0, 1.0}};
  const auto sum = superpose(both);
  for (std::size_t chip = 0; chip < bits.size() * 8; ++chip) {
    double ea = 0, eb = 0, es = 0;
    for (std::size_t i = chip * 200; i < (chip + 1) * 200; ++i) {
      ea += wa.samples[i] * wa.samples[i];
      eb += wb.samples[i] * wb.samples[i];
      es += sum.samples[i] * sum.samples[i];
    }
    CHECK(es == doctest::Approx(ea + eb).epsilon(1e-12));
    CHECK((ea == 0.0 || eb == 0.0));
  }
}

TEST_CASE("superpose: delays round to samples and extend the support") {
  SampledWaveform a{50e9, 0.0, {1.0, 2.0}};
  const std::vector<UserSignal> users{{a, 0.0, 1.0}, {a, 3.4 / 50e9, 2.0}};
  const auto s = superpose(users);
  CHECK(s.samples == std::vector<double>{1.0, 2.0, 0.0, 2.0, 4.0});
  SampledWaveform b{25e9, 0.0, {1.0}};
  const std::vector<UserSignal> bad{{a, 0.0, 1.0}, {b, 0.0, 1.0}};
  CHECK_THROWS_AS(superpose(bad), Error);
}

TEST_CASE("validate: scheme invariants") {
  const auto expect_invalid = [](const LinkConfig& cfg) {
    try {
      validate(cfg);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  };
  expect_invalid(default_link(scheme::Ook{0.0}));
  expect_invalid(default_link(scheme::Bpam{0.5, 0.5}));
  scheme::Psm same;
  same.shape1 = same.shape0;
  expect_invalid(default_link(same));
  LinkConfig ppm = default_link(scheme::Ppm{});
  ppm.scheme = scheme::Ppm{0.5e-9};
  expect_invalid(ppm);
  LinkConfig nc = default_link();
  nc.code = generate_th_code(1, 16, 4);
  expect_invalid(nc);
  LinkConfig wide = default_link();
  wide.timing.chip_duration = 2e-9;
  expect_invalid(wide);
  CHECK_THROWS_AS(modulate(Bits{}, default_link()), Error);
}

TEST_CASE("reconfigure: data rate, spectrum, range and code") {
  LinkConfig cfg = default_link(scheme::BiPhase{});
  cfg.pulse.tau = 0.05e-9;
  cfg.sample_rate = 200e9;
  cfg.timing = FrameTiming{2e-9, 8, 0.2e-9};
  LinkPatch p;
  FrameTiming faster = cfg.timing;
  faster.chip_duration = 1e-9;
  p.timing = faster;
  const auto r = reconfigure(cfg, p);
  CHECK(1.0 / r.timing.frame_duration() == doctest::Approx(2.0 / cfg.timing.frame_duration()));

  LinkConfig wide = default_link(scheme::BiPhase{});
  wide.pulse.tau = 0.5e-9;
  wide.timing = FrameTiming{8e-9, 8, 2e-9};
  LinkPatch narrow;
  narrow.tau = 0.25e-9;
  const auto w2 = reconfigure(wide, narrow);
  CHECK(measure_band(render_pulse(w2.pulse, w2.sample_rate)).bandwidth() >
        measure_band(render_pulse(wide.pulse, wide.sample_rate)).bandwidth());

  CHECK(reconfigure(cfg, LinkPatch{}) == cfg);
  LinkPatch gain;
  gain.tx_gain = 0.5;
  CHECK(reconfigure(cfg, gain).tx_gain == 0.5);
  LinkPatch bad;
  bad.code = generate_th_code(1, 10, 3);
  CHECK_THROWS_AS(reconfigure(cfg, bad), Error);

  LinkConfig ppm = default_link(scheme::Ppm{});
  LinkPatch t;
  t.timing = FrameTiming{5e-9, 8, 1e-9};
  CHECK(std::get<scheme::Ppm>(reconfigure(ppm, t).scheme).delta == 1e-9);
}

TEST_CASE("scheme names and decision rules") {
  CHECK(scheme_name(scheme::Ppm{}) == "TH-PPM");
  CHECK(scheme_name(scheme::Ook{}) == "TH-OOK");
  CHECK(uses_sign_decision(scheme::BiPhase{}));
  CHECK(uses_sign_decision(scheme::Bpam{1.0, -1.0}));
  CHECK_FALSE(uses_sign_decision(scheme::Bpam{1.0, 0.5}));
  CHECK_FALSE(uses_sign_decision(scheme::Ook{}));
}
