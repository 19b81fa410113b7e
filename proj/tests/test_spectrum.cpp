#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uwb/channel.hpp"
#include "uwb/error.hpp"
#include "uwb/spectrum.hpp"

using namespace uwb;

TEST_CASE("psd: a constant puts all its power at DC") {
  SampledWaveform dc{1000.0, 0.0, std::vector<double>(4096, 2.0)};
  const auto s = psd(dc, 512);
  CHECK(s.freq.size() == 257);
  CHECK(s.bin_width == doctest::Approx(1000.0 / 512));
  CHECK(s.density[0] * s.bin_width == doctest::Approx(4.0));
  for (std::size_t k = 1; k < s.density.size(); ++k) CHECK(s.density[k] < 1e-20);
}

TEST_CASE("psd: a periodic train has lines at multiples of the frame rate") {
  LinkConfig cfg = default_link();
  cfg.code = make_th_code({0}, 8);
  const auto s = psd(pulse_train(cfg, 200), 12800);  // 8 bins per 1/Tf
  const auto peak = std::max_element(s.density.begin(), s.density.end()) - s.density.begin();
  CHECK(peak % 8 == 0);
  CHECK(s.density[peak] > 1e6 * s.density[peak + 4]);
}

TEST_CASE("property: Parseval within 1 %") {
  SampledWaveform zero{50e9, 0.0, std::vector<double>(1 << 16, 0.0)};
  const auto n = apply_awgn(zero, 1e-3, 3.0, 5);
  double ms = 0.0;
  for (double x : n.samples) ms += x * x;
  ms /= n.size();
  CHECK(psd(n, 4096).total_power() == doctest::Approx(ms).epsilon(0.01));

  LinkConfig cfg = default_link();
  const auto train = pulse_train(cfg, 64);
  double mt = 0.0;
  for (double x : train.samples) mt += x * x;
  mt /= train.size();
  CHECK(psd(train, 1600 * 8).total_power() == doctest::Approx(mt).epsilon(0.01));
}

TEST_CASE("psd: short signals are rejected") {
  SampledWaveform w{50e9, 0.0, std::vector<double>(100, 1.0)};
  try {
    psd(w, 64);
    FAIL("expected SignalTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SignalTooShort);
  }
}

TEST_CASE("line_suppression: identical spectra and mismatched grids") {
  LinkConfig cfg = default_link();
  const auto s = psd(pulse_train(cfg, 100), 6400);
  CHECK(line_suppression(s, s) == 0.0);
  const auto t = psd(pulse_train(cfg, 100), 3200);
  try {
    line_suppression(s, t);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("write_psd_csv: header and row count") {
  SampledWaveform dc{1000.0, 0.0, std::vector<double>(64, 1.0)};
  const auto s = psd(dc, 16);
  std::ostringstream os;
  write_psd_csv(os, s);
  const auto text = os.str();
  CHECK(text.rfind("freq_hz,psd\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(s.freq.size() + 1));
}
