#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "pcfsq/errors.hpp"
#include "pcfsq/pulse.hpp"
#include "pcfsq/spectrum.hpp"

using namespace pcfsq;
using Catch::Approx;

namespace {

constexpr double kCarrier = 2.0 * std::numbers::pi * kSpeedOfLight / 810e-9;
const double kTwoPiC = 2.0 * std::numbers::pi * kSpeedOfLight;

Spectrum gaussian(double start, double step, std::size_t n, double centre, double sigma, double scale = 1.0) {
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (start + static_cast<double>(k) * step - centre) / sigma;
    d[k] = scale * std::exp(-0.5 * x * x);
  }
  return Spectrum(start, step, std::move(d));
}

// Continuous-integral oracle for the overlap of two Gaussian densities.
double quadrature_overlap(double delta, double sigma) {
  using boost::math::quadrature::gauss_kronrod;
  auto dp = [&](double w) { return std::exp(-w * w / (2 * sigma * sigma)); };
  auto ds = [&](double w) { return std::exp(-(w - delta) * (w - delta) / (2 * sigma * sigma)); };
  const double lo = -20 * sigma, hi = delta + 20 * sigma;
  const double cross = gauss_kronrod<double, 61>::integrate([&](double w) { return std::sqrt(dp(w) * ds(w)); }, lo, hi, 15, 1e-14);
  const double ep = gauss_kronrod<double, 61>::integrate(dp, lo, hi, 15, 1e-14);
  const double es = gauss_kronrod<double, 61>::integrate(ds, lo, hi, 15, 1e-14);
  return cross / (0.5 * (ep + es));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pcfsq_" + name);
}

LoadedSpectrum read_text(const std::string& text) {
  std::istringstream in(text);
  return read_spectrometer(in, "inline");
}

}  // namespace

TEST_CASE("Spectrum validates its invariants", "[spectrum]") {
  REQUIRE_THROWS_AS(Spectrum(0.0, 1.0, {0.0, 0.0, 0.0}), InputError);
  REQUIRE_THROWS_AS(Spectrum(0.0, 1.0, {1.0, -0.1}), InputError);
  REQUIRE_THROWS_AS(Spectrum(0.0, 0.0, {1.0, 1.0}), InputError);
  REQUIRE_THROWS_AS(Spectrum(0.0, 1.0, {1.0}), InputError);
  const std::vector<double> uneven{0.0, 1.0, 2.5};
  REQUIRE_THROWS_AS(Spectrum::from_grid(uneven, {1.0, 1.0, 1.0}), InputError);
  const std::vector<double> even{1.0, 2.0, 3.0};
  const auto s = Spectrum::from_grid(even, {1.0, 2.0, 1.0});
  REQUIRE(s.omega_step() == 1.0);
  REQUIRE(s.omega_end() == 3.0);
}

TEST_CASE("spectral_overlap: identical spectra give exactly one", "[spectrum][overlap]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> d(257);
    for (auto& v : d) v = u(rng) < 0.2 ? 0.0 : std::pow(u(rng), 8) * 1e-20;
    d[100] = 1e-20;
    const Spectrum s(kCarrier, 1e11, d);
    REQUIRE(spectral_overlap(s, s).v_max == 1.0);
  }
  const auto pulse = make_sech_pulse(7.3e-12, 120e-15, 810e-9, TimeGrid(8192, 10e-12));
  const auto s = spectrum(pulse);
  REQUIRE(spectral_overlap(s, s).v_max == 1.0);
}

TEST_CASE("spectral_overlap: Gaussian pair against closed form and quadrature", "[spectrum][overlap]") {
  // At delta = 2 sigma the closed form is e^{-1/2}.
  REQUIRE(quadrature_overlap(2.0, 1.0) == Approx(std::exp(-0.5)).epsilon(1e-12));
  const double sigma0 = 1e13;
  const std::size_t n0 = 4001;
  const double lo0 = kCarrier - 15 * sigma0;
  const double step0 = (2 * sigma0 + 30 * sigma0) / (n0 - 1);
  const auto a0 = gaussian(lo0, step0, n0, kCarrier, sigma0);
  const auto b0 = gaussian(lo0, step0, n0, kCarrier + 2 * sigma0, sigma0);
  REQUIRE(spectral_overlap(a0, b0).v_max == Approx(0.6065).margin(5e-5));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> log_sigma(std::log(1e12), std::log(5e13));
  std::uniform_real_distribution<double> rel_delta(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double sigma = std::exp(log_sigma(rng));
    const double delta = rel_delta(rng) * sigma;
    const double closed = std::exp(-delta * delta / (8 * sigma * sigma));
    REQUIRE(quadrature_overlap(delta / sigma, 1.0) == Approx(closed).margin(1e-9));

    const std::size_t n = 3001;
    const double lo = kCarrier - 15 * sigma;
    const double step = (delta + 30 * sigma) / (n - 1);
    const auto a = gaussian(lo, step, n, kCarrier, sigma);
    const auto b = gaussian(lo, step, n, kCarrier + delta, sigma);
    const auto report = spectral_overlap(a, b);
    REQUIRE(std::abs(report.v_max - closed) < 1e-9);
    REQUIRE(report.energy_p == Approx(sigma * std::sqrt(2 * std::numbers::pi)).epsilon(1e-9));
  }
}

TEST_CASE("spectral_overlap: disjoint supports give zero", "[spectrum][overlap]") {
  const Spectrum a(1.0, 1.0, {1, 2, 1, 0, 0, 0, 0});
  const Spectrum b(1.0, 1.0, {0, 0, 0, 0, 1, 3, 1});
  REQUIRE(spectral_overlap(a, b).v_max == 0.0);
}

TEST_CASE("spectral_overlap: shape-identical spectra with energy ratio rho", "[spectrum][overlap][property]") {
  const auto base = gaussian(kCarrier - 1e14, 1e11, 2001, kCarrier, 1e13);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> log_rho(std::log(1e-3), std::log(1e3));
  for (int trial = 0; trial < 50; ++trial) {
    const double rho = std::exp(log_rho(rng));
    std::vector<double> scaled(base.density().begin(), base.density().end());
    for (auto& v : scaled) v *= rho;
    const Spectrum other(base.omega_start(), base.omega_step(), scaled);
    REQUIRE(std::abs(spectral_overlap(base, other).v_max - 2 * std::sqrt(rho) / (1 + rho)) < 1e-9);
  }
}

TEST_CASE("spectral_overlap: symmetric, common-scale invariant, bounded (randomized)", "[spectrum][overlap][property]") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(u(rng) * 300);
    std::vector<double> dp(n), ds(n);
    for (std::size_t k = 0; k < n; ++k) {
      dp[k] = u(rng) < 0.3 ? 0.0 : u(rng);
      ds[k] = u(rng) < 0.3 ? 0.0 : u(rng);
    }
    dp[0] = ds[n / 2] = 0.5;
    const Spectrum a(kCarrier, 3e10, dp), b(kCarrier, 3e10, ds);
    const double v = spectral_overlap(a, b).v_max;
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    REQUIRE(spectral_overlap(b, a).v_max == Approx(v).epsilon(1e-14));

    const double c = std::exp(20 * (u(rng) - 0.5));
    for (auto& x : dp) x *= c;
    for (auto& x : ds) x *= c;
    REQUIRE(spectral_overlap(Spectrum(kCarrier, 3e10, dp), Spectrum(kCarrier, 3e10, ds)).v_max ==
            Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("spectral_overlap: grid mismatch is an error", "[spectrum][overlap]") {
  const Spectrum a(0.0, 1.0, {1, 2, 1});
  REQUIRE_THROWS_AS(spectral_overlap(a, Spectrum(0.5, 1.0, {1, 2, 1})), InputError);
  REQUIRE_THROWS_AS(spectral_overlap(a, Spectrum(0.0, 1.1, {1, 2, 1})), InputError);
  REQUIRE_THROWS_AS(spectral_overlap(a, Spectrum(0.0, 1.0, {1, 2, 1, 0})), InputError);
}

TEST_CASE("resample and on_common_grid", "[spectrum]") {
  const auto a = gaussian(kCarrier - 5e13, 1e11, 1001, kCarrier, 1e13);
  const auto same = resample(a, a.omega_start(), a.omega_step(), a.size());
  for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(same.density()[k] == Approx(a.density()[k]).margin(1e-15));

  const Spectrum lin(0.0, 1.0, {0.0, 2.0, 4.0});
  const auto fine = resample(lin, -1.0, 0.5, 8);
  const std::vector<double> expect{0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 0.0};
  for (std::size_t k = 0; k < expect.size(); ++k) REQUIRE(fine.density()[k] == Approx(expect[k]));

  const auto b = gaussian(kCarrier - 6e13, 0.7e11, 1701, kCarrier, 1e13);
  const auto [ca, cb] = on_common_grid(a, b);
  REQUIRE(ca.same_grid(cb));
  REQUIRE(ca.omega_step() <= 0.7e11 * (1 + 1e-12));
  REQUIRE(spectral_overlap(ca, cb).v_max == Approx(1.0).margin(1e-4));
}

TEST_CASE("predicted_visibility", "[spectrum]") {
  REQUIRE(predicted_visibility(0.97, 1.0) == 0.97);
  REQUIRE(predicted_visibility(0.98, 0.95) == Approx(0.931).epsilon(1e-12));
  REQUIRE(predicted_visibility(0.0, 0.8) == 0.0);
  REQUIRE_THROWS_AS(predicted_visibility(1.1, 0.9), InputError);
  REQUIRE_THROWS_AS(predicted_visibility(-0.1, 0.9), InputError);
  REQUIRE_THROWS_AS(predicted_visibility(0.9, 0.0), InputError);
  REQUIRE_THROWS_AS(predicted_visibility(0.9, 1.01), InputError);
}

TEST_CASE("rms_width", "[spectrum]") {
  for (double sigma : {3e12, 1e13, 4e13}) {
    const auto g = gaussian(kCarrier - 15 * sigma, sigma / 50, 1501, kCarrier, sigma);
    REQUIRE(rms_width(g) == Approx(sigma).epsilon(1e-9));
    std::vector<double> scaled(g.density().begin(), g.density().end());
    for (auto& v : scaled) v *= 123.0;
    REQUIRE(rms_width(Spectrum(g.omega_start(), g.omega_step(), scaled)) == Approx(rms_width(g)).epsilon(1e-13));
  }
  REQUIRE(rms_width(Spectrum(kCarrier, 1e11, {0, 0, 0, 5.0, 0, 0})) == 0.0);
}

TEST_CASE("load_spectrometer_file: wavelength to angular frequency with Jacobian", "[spectrum][io]") {
  const auto loaded = read_text("800 1.0\n820 1.0\n");
  const auto& s = loaded.spectrum;
  REQUIRE(s.size() == 2);
  REQUIRE(s.omega_start() == Approx(kTwoPiC / 820e-9).epsilon(1e-15));
  REQUIRE(s.omega_end() == Approx(kTwoPiC / 800e-9).epsilon(1e-15));
  REQUIRE(s.density()[0] == Approx(820e-9 * 820e-9 / kTwoPiC).epsilon(1e-14));
  REQUIRE(s.density()[1] == Approx(800e-9 * 800e-9 / kTwoPiC).epsilon(1e-14));
  REQUIRE(loaded.clamped_rows == 0);

  const auto with_header = read_text("# spectrometer export\n# wavelength_nm intensity\n\n800 1.0  # first\n820 1.0\n");
  REQUIRE(with_header.spectrum.same_grid(s));
  REQUIRE(with_header.spectrum.density()[0] == s.density()[0]);
  REQUIRE(with_header.spectrum.density()[1] == s.density()[1]);

  const auto clamped = read_text("800 1.0\n810 -0.3\n820 1.0\n");
  REQUIRE(clamped.clamped_rows == 1);
  for (double d : clamped.spectrum.density()) REQUIRE(d >= 0.0);
}

TEST_CASE("load_spectrometer_file: interpolation onto a uniform omega grid", "[spectrum][io]") {
  // Intensity chosen so that the converted density is linear in omega; linear
  // interpolation must then reproduce it exactly at every uniform grid point.
  std::ostringstream text;
  text.precision(17);
  for (double wl = 780.0; wl <= 840.0; wl += 2.0) {
    const double w = kTwoPiC / (wl * 1e-9);
    const double density = 1.0 + (w - 2.2e15) / 1e14;
    text << wl << ' ' << density * kTwoPiC / std::pow(wl * 1e-9, 2) << '\n';
  }
  const auto s = read_text(text.str()).spectrum;
  REQUIRE(s.size() == 31);
  for (std::size_t k = 0; k < s.size(); ++k)
    REQUIRE(s.density()[k] == Approx(1.0 + (s.omega(k) - 2.2e15) / 1e14).epsilon(1e-12));
}

TEST_CASE("load_spectrometer_file: errors carry the line number", "[spectrum][io]") {
  REQUIRE_THROWS_AS(read_text("800 1.0\n810 abc\n"), ParseError);
  try {
    read_text("# header\n800 1.0\n810 1.0\n805 1.0\n");
    FAIL("non-monotone wavelength accepted");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 4);
    REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("monotone"));
  }
  try {
    read_text("800 1.0\n810\n");
    FAIL("single column accepted");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 2);
  }
  REQUIRE_THROWS_AS(read_text("800 1.0\n800 2.0\n"), ParseError);
  REQUIRE_THROWS_AS(read_text("800 1.0\n"), ParseError);
  REQUIRE_THROWS_AS(read_text("800 0\n810 0\n"), ParseError);
  REQUIRE_THROWS_AS(load_spectrometer_file("/nonexistent/spectrum.txt"), ParseError);
  // Descending wavelength order is accepted.
  REQUIRE(read_text("820 1.0\n810 2.0\n800 1.0\n").spectrum.size() == 3);
}

TEST_CASE("spectrum file round trip keeps the overlap", "[spectrum][io][property]") {
  const TimeGrid grid(2048, 10e-12);
  FiberParams fiber;
  fiber.gamma = 0.0792;
  const auto sa = spectrum(propagate(make_sech_pulse(14.6e-12, 120e-15, 810e-9, grid), fiber, 200));
  const auto sb = spectrum(propagate(make_sech_pulse(15.4e-12, 120e-15, 810e-9, grid), fiber, 200));
  const auto path = temp_file("roundtrip.txt");
  write_spectrometer_file(sa, path);
  const auto reloaded = load_spectrometer_file(path);
  std::filesystem::remove(path);
  REQUIRE(reloaded.spectrum.same_grid(sb));
  REQUIRE(std::abs(spectral_overlap(reloaded.spectrum, sb).v_max - spectral_overlap(sa, sb).v_max) < 1e-6);
}
