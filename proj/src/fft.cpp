#include "pcfsq/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace pcfsq {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlan::Impl {
  fftw_complex* buffer = nullptr;
  fftw_plan to_freq = nullptr;
  fftw_plan to_time = nullptr;

  explicit Impl(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(n);
    if (buffer == nullptr) throw std::bad_alloc();
    const int len = static_cast<int>(n);
    to_freq = fftw_plan_dft_1d(len, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    to_time = fftw_plan_dft_1d(len, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    for (std::size_t k = 0; k < n; ++k) buffer[k][0] = buffer[k][1] = 0.0;
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (to_freq) fftw_destroy_plan(to_freq);
    if (to_time) fftw_destroy_plan(to_time);
    fftw_free(buffer);
  }
};

FftPlan::FftPlan(std::size_t n) : n_(n), impl_(std::make_unique<Impl>(n)) {}
FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

std::span<std::complex<double>> FftPlan::data() noexcept {
  return {reinterpret_cast<std::complex<double>*>(impl_->buffer), n_};
}

std::span<const std::complex<double>> FftPlan::data() const noexcept {
  return {reinterpret_cast<const std::complex<double>*>(impl_->buffer), n_};
}

void FftPlan::to_frequency() { fftw_execute(impl_->to_freq); }
void FftPlan::to_time() { fftw_execute(impl_->to_time); }

}  // namespace pcfsq
