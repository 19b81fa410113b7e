#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace uwb::detail {

/// Real-to-complex transform of fixed length backed by FFTW. Planning is
/// serialized internally; execute() may run concurrently on distinct objects.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// Transforms input zero-padded (or truncated) to size(); returns n/2 + 1 bins.
  std::span<const std::complex<double>> forward(std::span<const double> input);

 private:
  std::size_t n_;
  double* in_ = nullptr;
  void* out_ = nullptr;
  void* plan_ = nullptr;
  std::vector<std::complex<double>> result_;
};

}  // namespace uwb::detail
