#pragma once

// Pointwise kernels used by the split-step solver. Each kernel has an
// OpenMP version in pcfsq::kernels and a plain loop in pcfsq::kernels::serial
// kept as the reference implementation. Every kernel is elementwise, so both
// versions produce bit-identical results regardless of thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace pcfsq::kernels {

using cplx = std::complex<double>;

// Below this many samples the OpenMP versions run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 2048;

// field[k] *= factor[k]
void multiply(std::span<cplx> field, std::span<const cplx> factor);

// field[k] *= exp(i * phase_per_power * |field[k]|^2)
void kerr_phase(std::span<cplx> field, double phase_per_power);

// field[k] *= s
void scale(std::span<cplx> field, double s);

// out[k] = exp(step * (i*beta2/2*w^2 + i*beta3/6*w^3 - alpha/2)) with w = omega[k]
void dispersion_factor(std::span<cplx> out, std::span<const double> omega, double beta2,
                       double beta3, double alpha, double step);

namespace serial {

void multiply(std::span<cplx> field, std::span<const cplx> factor);
void kerr_phase(std::span<cplx> field, double phase_per_power);
void scale(std::span<cplx> field, double s);
void dispersion_factor(std::span<cplx> out, std::span<const double> omega, double beta2,
                       double beta3, double alpha, double step);

}  // namespace serial

}  // namespace pcfsq::kernels
