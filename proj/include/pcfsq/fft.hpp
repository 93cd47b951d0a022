#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace pcfsq {

// In-place complex DFT of fixed length backed by FFTW, owning an aligned
// work buffer. Planning is serialized internally so instances may be built
// concurrently from several threads; a single instance is not shared.
//
// Sign conventions follow the fiber-optics literature:
//   to_frequency:  X[j] = sum_k x[k] exp(+2 pi i j k / n)
//   to_time:       x[k] = sum_j X[j] exp(-2 pi i j k / n)   (unnormalized)
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::span<std::complex<double>> data() noexcept;
  std::span<const std::complex<double>> data() const noexcept;

  void to_frequency();
  void to_time();

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pcfsq
