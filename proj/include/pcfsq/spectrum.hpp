#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pcfsq {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Nonnegative spectral density |E(w)|^2 on a uniform, strictly increasing
// angular-frequency grid (rad/s). Units of the density are arbitrary.
class Spectrum {
 public:
  Spectrum(double omega_start, double omega_step, std::vector<double> density);

  // Builds from explicit grid points, which must be uniform to 1e-9 relative.
  static Spectrum from_grid(std::span<const double> omega, std::vector<double> density);

  std::size_t size() const noexcept { return density_.size(); }
  double omega_start() const noexcept { return start_; }
  double omega_step() const noexcept { return step_; }
  double omega(std::size_t k) const noexcept { return start_ + static_cast<double>(k) * step_; }
  double omega_end() const noexcept { return omega(size() - 1); }
  std::vector<double> omega_grid() const;
  std::span<const double> density() const noexcept { return density_; }

  bool same_grid(const Spectrum& other) const noexcept;

 private:
  double start_;
  double step_;
  std::vector<double> density_;
};

struct OverlapReport {
  double v_max = 0.0;
  double energy_p = 0.0;
  double energy_s = 0.0;
};

// Upper bound on the interference visibility of two fields from their
// amplitude spectra alone:
//
//   v_max = int |E_p| |E_s| dw / ( (int |E_p|^2 dw + int |E_s|^2 dw) / 2 )
//
// with |E| = sqrt(density), i.e. spectral phase discarded. Trapezoidal rule.
// Both spectra must share one grid; see resample().
OverlapReport spectral_overlap(const Spectrum& sp, const Spectrum& ss);

// Linear interpolation onto a new uniform grid; zero outside the source span.
Spectrum resample(const Spectrum& s, double omega_start, double omega_step, std::size_t n);

// Common grid covering both spectra at the finer of the two spacings.
// Returns the pair unchanged when the grids already match.
std::pair<Spectrum, Spectrum> on_common_grid(const Spectrum& a, const Spectrum& b);

// Visibility predicted from the overlap bound, with a power-independent
// spatial mode-matching factor in (0, 1].
double predicted_visibility(double v_max, double kappa_spatial);

// Density-weighted standard deviation of omega.
double rms_width(const Spectrum& s);

struct LoadedSpectrum {
  Spectrum spectrum;
  std::size_t clamped_rows = 0;  // negative intensities set to zero
};

// Spectrometer text format: one "wavelength_nm intensity" pair per line,
// '#' starts a comment. Intensities per unit wavelength are converted to
// per unit angular frequency with the Jacobian lambda^2 / (2 pi c), then
// resampled linearly onto a uniform omega grid with as many points as rows.
LoadedSpectrum load_spectrometer_file(const std::filesystem::path& path);
LoadedSpectrum read_spectrometer(std::istream& in, const std::string& source_name);

// Inverse of the loader. Only bins with omega > 0 are written, ordered by
// increasing wavelength.
void write_spectrometer(const Spectrum& s, std::ostream& out);
void write_spectrometer_file(const Spectrum& s, const std::filesystem::path& path);

}  // namespace pcfsq
