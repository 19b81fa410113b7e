#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace uwb::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n), result_(n / 2 + 1) {
  std::lock_guard lock(planner_mutex());
  in_ = fftw_alloc_real(n_);
  auto* out = fftw_alloc_complex(n_ / 2 + 1);
  out_ = out;
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), in_, out, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

std::span<const std::complex<double>> RealFft::forward(std::span<const double> input) {
  const std::size_t m = std::min(input.size(), n_);
  std::copy_n(input.begin(), m, in_);
  std::fill(in_ + m, in_ + n_, 0.0);
  fftw_execute(static_cast<fftw_plan>(plan_));
  const auto* out = static_cast<const fftw_complex*>(out_);
  for (std::size_t k = 0; k < result_.size(); ++k) {
    result_[k] = {out[k][0], out[k][1]};
  }
  return result_;
}

}  // namespace uwb::detail
