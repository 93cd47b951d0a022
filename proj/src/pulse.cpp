#include "pcfsq/pulse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "pcfsq/errors.hpp"
#include "pcfsq/fft.hpp"
#include "pcfsq/kernels.hpp"

namespace pcfsq {

namespace {
constexpr double kInputEdgeRatio = 1e-6;
constexpr double kOutputEdgeRatio = 1e-3;
constexpr int kMinSteps = 100;
}  // namespace

TimeGrid::TimeGrid(std::size_t n_samples, double window) : n_(n_samples), window_(window) {
  if (n_ < 256 || !std::has_single_bit(n_))
    throw InputError("time grid size must be a power of two >= 256, got " + std::to_string(n_));
  if (!std::isfinite(window_) || window_ <= 0.0) throw InputError("time window must be positive");
}

double TimeGrid::omega_step() const noexcept { return 2.0 * std::numbers::pi / window_; }

std::vector<double> TimeGrid::omega_offsets_dft_order() const {
  std::vector<double> w(n_);
  const double dw = omega_step();
  const auto n = static_cast<std::ptrdiff_t>(n_);
  for (std::ptrdiff_t j = 0; j < n; ++j) w[j] = static_cast<double>(j < n / 2 ? j : j - n) * dw;
  return w;
}

void FiberParams::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw InputError("fiber length must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("fiber gamma must be >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("fiber alpha must be >= 0");
  if (!std::isfinite(beta2) || !std::isfinite(beta3)) throw InputError("dispersion must be finite");
}

PulseEnvelope::PulseEnvelope(TimeGrid grid, std::vector<cplx> samples, double center_wavelength)
    : grid_(grid), samples_(std::move(samples)), center_wavelength_(center_wavelength) {
  if (samples_.size() != grid_.n_samples()) throw InputError("sample count does not match grid");
  if (!(center_wavelength_ > 0.0)) throw InputError("center wavelength must be positive");
  const double e = energy();
  if (!std::isfinite(e) || e <= 0.0) throw InputError("pulse energy must be finite and positive");
}

double PulseEnvelope::carrier_omega() const noexcept {
  return 2.0 * std::numbers::pi * kSpeedOfLight / center_wavelength_;
}

double PulseEnvelope::energy() const noexcept {
  double s = 0.0;
  for (const auto& a : samples_) s += std::norm(a);
  return s * grid_.dt();
}

double PulseEnvelope::peak_power() const noexcept {
  double p = 0.0;
  for (const auto& a : samples_) p = std::max(p, std::norm(a));
  return p;
}

double PulseEnvelope::edge_ratio() const noexcept {
  const double edge = std::max(std::norm(samples_.front()), std::norm(samples_.back()));
  return std::sqrt(edge / peak_power());
}

double PulseEnvelope::rms_duration() const noexcept {
  double norm = 0.0;
  double mean = 0.0;
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const double p = std::norm(samples_[k]);
    norm += p;
    mean += p * grid_.time(k);
  }
  mean /= norm;
  double var = 0.0;
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const double x = grid_.time(k) - mean;
    var += std::norm(samples_[k]) * x * x;
  }
  return std::sqrt(var / norm);
}

SechShape sech_shape(double energy, double fwhm) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw InputError("pulse energy must be positive");
  if (!(fwhm > 0.0) || !std::isfinite(fwhm)) throw InputError("pulse FWHM must be positive");
  const double t0 = fwhm / kSechFwhmFactor;
  return {energy / (2.0 * t0), t0};
}

PulseEnvelope make_sech_pulse(double energy, double fwhm, double center_wavelength,
                              const TimeGrid& grid) {
  const auto shape = sech_shape(energy, fwhm);
  if (grid.window() < 20.0 * fwhm)
    throw InputError("time window " + std::to_string(grid.window()) + " s is shorter than 20 x FWHM");
  std::vector<cplx> a(grid.n_samples());
  const double amp = std::sqrt(shape.peak_power);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = amp / std::cosh(grid.time(k) / shape.t0);
  return PulseEnvelope(grid, std::move(a), center_wavelength);
}

PulseEnvelope propagate(const PulseEnvelope& pulse, const FiberParams& fiber, int n_steps) {
  fiber.validate();
  if (n_steps < kMinSteps)
    throw InputError("propagate: n_steps must be >= " + std::to_string(kMinSteps));
  if (pulse.edge_ratio() >= kInputEdgeRatio)
    throw InputError("propagate: input pulse is not contained in the time window");

  const auto& grid = pulse.grid();
  const std::size_t n = grid.n_samples();
  const double h = fiber.length / n_steps;
  const auto omega = grid.omega_offsets_dft_order();

  // The 1/n of the inverse DFT is folded into the linear factors.
  std::vector<cplx> half(n);
  std::vector<cplx> full(n);
  kernels::dispersion_factor(half, omega, fiber.beta2, fiber.beta3, fiber.alpha, 0.5 * h);
  kernels::dispersion_factor(full, omega, fiber.beta2, fiber.beta3, fiber.alpha, h);
  const double inv_n = 1.0 / static_cast<double>(n);
  kernels::scale(half, inv_n);
  kernels::scale(full, inv_n);

  FftPlan fft(n);
  auto field = fft.data();
  std::copy(pulse.samples().begin(), pulse.samples().end(), field.begin());

  fft.to_frequency();
  kernels::multiply(field, half);
  fft.to_time();
  const double kerr = fiber.gamma * h;
  for (int step = 0; step < n_steps; ++step) {
    kernels::kerr_phase(field, kerr);
    fft.to_frequency();
    kernels::multiply(field, step + 1 == n_steps ? std::span<const cplx>(half) : std::span<const cplx>(full));
    fft.to_time();
  }

  std::vector<cplx> out(field.begin(), field.end());
  for (const auto& a : out)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw NumericalError("propagate: non-finite field");
  PulseEnvelope result(grid, std::move(out), pulse.center_wavelength());
  if (result.edge_ratio() > kOutputEdgeRatio)
    throw NumericalError("propagate: field reached the time-window edges (wraparound)");
  return result;
}

Spectrum spectrum(const PulseEnvelope& pulse) {
  const auto& grid = pulse.grid();
  const std::size_t n = grid.n_samples();
  FftPlan fft(n);
  auto field = fft.data();
  std::copy(pulse.samples().begin(), pulse.samples().end(), field.begin());
  fft.to_frequency();

  const double dt = grid.dt();
  std::vector<double> density(n);
  for (std::size_t m = 0; m < n; ++m) density[m] = std::norm(field[(m + n / 2) % n]) * dt * dt;
  const double dw = grid.omega_step();
  const double start = pulse.carrier_omega() - static_cast<double>(n / 2) * dw;
  return Spectrum(start, dw, std::move(density));
}

double gamma_from_mode_area(double mode_field_diameter, double wavelength, double n2) {
  if (!(mode_field_diameter > 0.0) || !(wavelength > 0.0) || !(n2 > 0.0))
    throw InputError("gamma_from_mode_area: inputs must be positive");
  const double radius = 0.5 * mode_field_diameter;
  const double area = std::numbers::pi * radius * radius;
  return 2.0 * std::numbers::pi * n2 / (wavelength * area);
}

}  // namespace pcfsq
