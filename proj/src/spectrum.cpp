#include "pcfsq/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

#include "pcfsq/errors.hpp"

namespace pcfsq {

namespace {

constexpr double kGridTolerance = 1e-9;

void check_density(std::span<const double> density) {
  if (density.size() < 2) throw InputError("spectrum needs at least two grid points");
  bool any_positive = false;
  for (double d : density) {
    if (!std::isfinite(d) || d < 0.0)
      throw InputError("spectral density must be finite and nonnegative");
    any_positive = any_positive || d > 0.0;
  }
  if (!any_positive) throw InputError("spectrum is identically zero");
}

double trapezoid_weight(std::size_t k, std::size_t n) { return (k == 0 || k + 1 == n) ? 0.5 : 1.0; }

// sqrt(a) * sqrt(b), exact when a == b.
double geometric_mean(double a, double b) { return a == b ? a : std::sqrt(a) * std::sqrt(b); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

Spectrum::Spectrum(double omega_start, double omega_step, std::vector<double> density)
    : start_(omega_start), step_(omega_step), density_(std::move(density)) {
  if (!std::isfinite(start_) || !std::isfinite(step_) || step_ <= 0.0)
    throw InputError("spectrum grid must be finite and strictly increasing");
  check_density(density_);
}

Spectrum Spectrum::from_grid(std::span<const double> omega, std::vector<double> density) {
  if (omega.size() != density.size()) throw InputError("grid and density sizes differ");
  if (omega.size() < 2) throw InputError("spectrum needs at least two grid points");
  const double step = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
  if (!(step > 0.0)) throw InputError("spectrum grid must be strictly increasing");
  for (std::size_t k = 1; k < omega.size(); ++k) {
    const double d = omega[k] - omega[k - 1];
    if (std::abs(d - step) > kGridTolerance * step * static_cast<double>(omega.size()))
      throw InputError("spectrum grid is not uniform");
  }
  return Spectrum(omega.front(), step, std::move(density));
}

std::vector<double> Spectrum::omega_grid() const {
  std::vector<double> w(size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = omega(k);
  return w;
}

bool Spectrum::same_grid(const Spectrum& other) const noexcept {
  if (size() != other.size()) return false;
  const double span = step_ * static_cast<double>(size() - 1);
  return std::abs(step_ - other.step_) <= kGridTolerance * step_ &&
         std::abs(start_ - other.start_) <= kGridTolerance * span;
}

OverlapReport spectral_overlap(const Spectrum& sp, const Spectrum& ss) {
  if (!sp.same_grid(ss)) throw InputError("spectral_overlap: spectra are on different grids");
  const auto dp = sp.density();
  const auto ds = ss.density();
  const std::size_t n = dp.size();

  // One summation order for all three integrals, so sp == ss gives exactly 1.
  double cross = 0.0;
  double sum_p = 0.0;
  double sum_s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = trapezoid_weight(k, n);
    cross += w * geometric_mean(dp[k], ds[k]);
    sum_p += w * dp[k];
    sum_s += w * ds[k];
  }

  OverlapReport report;
  const double h = sp.omega_step();
  report.energy_p = h * sum_p;
  report.energy_s = h * sum_s;
  const double mean_energy = 0.5 * (report.energy_p + report.energy_s);
  if (!(mean_energy > 0.0)) throw InputError("spectral_overlap: spectra carry no energy");
  report.v_max = std::clamp(h * cross / mean_energy, 0.0, 1.0);
  return report;
}

Spectrum resample(const Spectrum& s, double omega_start, double omega_step, std::size_t n) {
  std::vector<double> out(n, 0.0);
  const auto d = s.density();
  const double last = static_cast<double>(s.size() - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = (omega_start + static_cast<double>(j) * omega_step - s.omega_start()) / s.omega_step();
    // Grid points that coincide with the source endpoints up to rounding.
    if (x < -1e-9 || x > last + 1e-9) continue;
    const double xc = std::clamp(x, 0.0, last);
    const auto i = std::min(static_cast<std::size_t>(xc), s.size() - 2);
    const double t = xc - static_cast<double>(i);
    out[j] = (1.0 - t) * d[i] + t * d[i + 1];
  }
  return Spectrum(omega_start, omega_step, std::move(out));
}

std::pair<Spectrum, Spectrum> on_common_grid(const Spectrum& a, const Spectrum& b) {
  if (a.same_grid(b)) return {a, b};
  const double lo = std::min(a.omega_start(), b.omega_start());
  const double hi = std::max(a.omega_end(), b.omega_end());
  const double fine = std::min(a.omega_step(), b.omega_step());
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / fine - 1e-9)) + 1;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  return {resample(a, lo, step, n), resample(b, lo, step, n)};
}

double predicted_visibility(double v_max, double kappa_spatial) {
  if (!(v_max >= 0.0 && v_max <= 1.0)) throw InputError("predicted_visibility: v_max outside [0, 1]");
  if (!(kappa_spatial > 0.0 && kappa_spatial <= 1.0))
    throw InputError("predicted_visibility: kappa_spatial outside (0, 1]");
  return std::clamp(kappa_spatial * v_max, 0.0, 1.0);
}

double rms_width(const Spectrum& s) {
  const auto d = s.density();
  const std::size_t n = d.size();
  double norm = 0.0;
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = trapezoid_weight(k, n) * d[k];
    norm += w;
    mean += w * static_cast<double>(k);
  }
  if (!(norm > 0.0)) throw InputError("rms_width: spectrum is identically zero");
  mean /= norm;
  // Moments in grid-index units keep the large carrier offset out of the sums.
  double var = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = static_cast<double>(k) - mean;
    var += trapezoid_weight(k, n) * d[k] * x * x;
  }
  return std::sqrt(var / norm) * s.omega_step();
}

LoadedSpectrum read_spectrometer(std::istream& in, const std::string& source_name) {
  std::vector<double> lambda_m;
  std::vector<double> intensity;
  std::size_t clamped = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;

    const auto sep = body.find_first_of(" \t,");
    if (sep == std::string_view::npos) throw ParseError(source_name, line_no, "expected two columns");
    const auto first = trim(body.substr(0, sep));
    auto second = trim(body.substr(sep + 1));
    if (!second.empty() && second.front() == ',') second = trim(second.substr(1));
    double wl_nm = 0.0;
    double value = 0.0;
    if (!parse_double(first, wl_nm) || !parse_double(second, value))
      throw ParseError(source_name, line_no, "expected 'wavelength_nm intensity'");
    if (!std::isfinite(wl_nm) || wl_nm <= 0.0 || !std::isfinite(value))
      throw ParseError(source_name, line_no, "wavelength must be positive and values finite");
    if (value < 0.0) {
      value = 0.0;
      ++clamped;
    }
    const double wl = wl_nm * 1e-9;
    if (lambda_m.size() >= 2) {
      const bool rising = lambda_m[1] > lambda_m[0];
      if (rising ? !(wl > lambda_m.back()) : !(wl < lambda_m.back()))
        throw ParseError(source_name, line_no, "wavelengths are not strictly monotone");
    } else if (lambda_m.size() == 1 && wl == lambda_m.back()) {
      throw ParseError(source_name, line_no, "wavelengths are not strictly monotone");
    }
    lambda_m.push_back(wl);
    intensity.push_back(value);
  }
  if (lambda_m.size() < 2) throw ParseError(source_name, line_no, "need at least two data rows");

  const double two_pi_c = 2.0 * std::numbers::pi * kSpeedOfLight;
  const std::size_t n = lambda_m.size();
  std::vector<double> omega(n);
  std::vector<double> density(n);
  for (std::size_t k = 0; k < n; ++k) {
    omega[k] = two_pi_c / lambda_m[k];
    density[k] = intensity[k] * lambda_m[k] * lambda_m[k] / two_pi_c;
  }
  if (omega.front() > omega.back()) {
    std::reverse(omega.begin(), omega.end());
    std::reverse(density.begin(), density.end());
  }

  const double start = omega.front();
  const double step = (omega.back() - start) / static_cast<double>(n - 1);
  std::vector<double> uniform(n);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::min(start + static_cast<double>(j) * step, omega.back());
    while (seg + 2 < n && omega[seg + 1] < w) ++seg;
    const double t = std::clamp((w - omega[seg]) / (omega[seg + 1] - omega[seg]), 0.0, 1.0);
    uniform[j] = (1.0 - t) * density[seg] + t * density[seg + 1];
  }
  if (std::none_of(uniform.begin(), uniform.end(), [](double v) { return v > 0.0; }))
    throw ParseError(source_name, line_no, "spectrum is identically zero");
  return {Spectrum(start, step, std::move(uniform)), clamped};
}

LoadedSpectrum load_spectrometer_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_spectrometer(in, path.string());
}

void write_spectrometer(const Spectrum& s, std::ostream& out) {
  const double two_pi_c = 2.0 * std::numbers::pi * kSpeedOfLight;
  out << "# wavelength_nm intensity\n";
  char buf[96];
  const auto d = s.density();
  std::size_t written = 0;
  for (std::size_t k = s.size(); k-- > 0;) {
    const double w = s.omega(k);
    if (!(w > 0.0)) break;
    const double wl = two_pi_c / w;
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", wl * 1e9, d[k] * two_pi_c / (wl * wl));
    out << buf;
    ++written;
  }
  if (written < 2) throw InputError("spectrum has fewer than two positive-frequency bins");
}

void write_spectrometer_file(const Spectrum& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_spectrometer(s, out);
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace pcfsq
