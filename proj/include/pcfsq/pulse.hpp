#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pcfsq/spectrum.hpp"

namespace pcfsq {

using cplx = std::complex<double>;

// Uniform time grid centered on t = 0: t_k = (k - n/2) * dt.
class TimeGrid {
 public:
  TimeGrid(std::size_t n_samples, double window);

  std::size_t n_samples() const noexcept { return n_; }
  double window() const noexcept { return window_; }
  double dt() const noexcept { return window_ / static_cast<double>(n_); }
  double time(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * dt();
  }
  // Spacing of the conjugate angular-frequency axis, 2 pi / window.
  double omega_step() const noexcept;
  // Angular-frequency offsets from the carrier in DFT order (0, +, ..., -).
  std::vector<double> omega_offsets_dft_order() const;

 private:
  std::size_t n_;
  double window_;
};

struct FiberParams {
  double length = 1.0;       // m
  double beta2 = -3.0e-26;   // s^2/m
  double beta3 = 0.0;        // s^3/m
  double gamma = 0.0;        // 1/(W m)
  double alpha = 0.0;        // power loss, 1/m

  void validate() const;
};

// Slowly varying complex envelope A(t_k) in sqrt(W).
class PulseEnvelope {
 public:
  PulseEnvelope(TimeGrid grid, std::vector<cplx> samples, double center_wavelength);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  double center_wavelength() const noexcept { return center_wavelength_; }
  double carrier_omega() const noexcept;

  double energy() const noexcept;       // sum |A|^2 dt
  double peak_power() const noexcept;   // max |A|^2
  // max(|A_first|, |A_last|) / max |A|
  double edge_ratio() const noexcept;
  // Power-weighted RMS duration.
  double rms_duration() const noexcept;

 private:
  TimeGrid grid_;
  std::vector<cplx> samples_;
  double center_wavelength_;
};

// FWHM of sech^2(t/T0) in units of T0: 2 ln(1 + sqrt 2).
inline constexpr double kSechFwhmFactor = 1.7627471740390860505;

struct SechShape {
  double peak_power;  // W
  double t0;          // s
};

// P0 and T0 of a sech pulse with the given energy and intensity FWHM; E = 2 P0 T0.
SechShape sech_shape(double energy, double fwhm);

// A(t) = sqrt(P0) sech(t / T0). The grid window must be at least 20 FWHM.
PulseEnvelope make_sech_pulse(double energy, double fwhm, double center_wavelength,
                              const TimeGrid& grid);

// Symmetric split-step integration of
//   dA/dz = -i beta2/2 A_tt + beta3/6 A_ttt + i gamma |A|^2 A - alpha/2 A
// over the fiber length with n_steps uniform steps. Adjacent half dispersion
// steps are fused, so each step costs one forward/inverse FFT pair.
PulseEnvelope propagate(const PulseEnvelope& pulse, const FiberParams& fiber, int n_steps);

// |A~(w)|^2 with A~(w) = int A(t) exp(i w t) dt, on the absolute angular
// frequency axis (carrier + offset), sorted by increasing omega.
Spectrum spectrum(const PulseEnvelope& pulse);

// gamma = 2 pi n2 / (lambda A_eff), A_eff = pi (mfd / 2)^2.
double gamma_from_mode_area(double mode_field_diameter, double wavelength, double n2);

}  // namespace pcfsq
