#include "pcfsq/kernels.hpp"

#include <cassert>
#include <cmath>

namespace pcfsq::kernels {

namespace {

inline cplx kerr_factor(const cplx& a, double phase_per_power) {
  const double phi = phase_per_power * std::norm(a);
  return {std::cos(phi), std::sin(phi)};
}

inline cplx dispersion_at(double w, double beta2, double beta3, double alpha, double step) {
  const double phase = step * (0.5 * beta2 * w * w + beta3 / 6.0 * w * w * w);
  const double amp = std::exp(-0.5 * alpha * step);
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

}  // namespace

namespace serial {

void multiply(std::span<cplx> field, std::span<const cplx> factor) {
  assert(field.size() == factor.size());
  for (std::size_t k = 0; k < field.size(); ++k) field[k] *= factor[k];
}

void kerr_phase(std::span<cplx> field, double phase_per_power) {
  for (auto& a : field) a *= kerr_factor(a, phase_per_power);
}

void scale(std::span<cplx> field, double s) {
  for (auto& a : field) a *= s;
}

void dispersion_factor(std::span<cplx> out, std::span<const double> omega, double beta2,
                       double beta3, double alpha, double step) {
  assert(out.size() == omega.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = dispersion_at(omega[k], beta2, beta3, alpha, step);
}

}  // namespace serial

void multiply(std::span<cplx> field, std::span<const cplx> factor) {
  assert(field.size() == factor.size());
  const auto n = static_cast<std::ptrdiff_t>(field.size());
  cplx* f = field.data();
  const cplx* g = factor.data();
#pragma omp parallel for schedule(static) if (field.size() >= kParallelThreshold)
  for (std::ptrdiff_t k = 0; k < n; ++k) f[k] *= g[k];
}

void kerr_phase(std::span<cplx> field, double phase_per_power) {
  const auto n = static_cast<std::ptrdiff_t>(field.size());
  cplx* f = field.data();
#pragma omp parallel for schedule(static) if (field.size() >= kParallelThreshold)
  for (std::ptrdiff_t k = 0; k < n; ++k) f[k] *= kerr_factor(f[k], phase_per_power);
}

void scale(std::span<cplx> field, double s) {
  const auto n = static_cast<std::ptrdiff_t>(field.size());
  cplx* f = field.data();
#pragma omp parallel for schedule(static) if (field.size() >= kParallelThreshold)
  for (std::ptrdiff_t k = 0; k < n; ++k) f[k] *= s;
}

void dispersion_factor(std::span<cplx> out, std::span<const double> omega, double beta2,
                       double beta3, double alpha, double step) {
  assert(out.size() == omega.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  cplx* o = out.data();
  const double* w = omega.data();
#pragma omp parallel for schedule(static) if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t k = 0; k < n; ++k) o[k] = dispersion_at(w[k], beta2, beta3, alpha, step);
}

}  // namespace pcfsq::kernels
