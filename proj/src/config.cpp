#include "pcfsq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string_view>

#include "pcfsq/errors.hpp"

namespace pcfsq {

namespace {

// Calibrated against the default sweep so that the best squeezing is close
// to -3.9 dB; see calibrate_kappa_g().
constexpr double kDefaultKappaG = 1.14e13;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

struct Parsed {
  ExperimentConfig cfg;
  std::optional<double> gamma;
};

using Setter = std::function<bool(Parsed&, std::string_view)>;

Setter real(double ExperimentConfig::*field) {
  return [field](Parsed& p, std::string_view v) {
    auto x = to_double(v);
    if (x) p.cfg.*field = *x;
    return x.has_value();
  };
}

Setter fiber_real(double FiberParams::*field) {
  return [field](Parsed& p, std::string_view v) {
    auto x = to_double(v);
    if (x) p.cfg.fiber.*field = *x;
    return x.has_value();
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"length_m", fiber_real(&FiberParams::length)},
      {"beta2_s2_per_m", fiber_real(&FiberParams::beta2)},
      {"beta3_s3_per_m", fiber_real(&FiberParams::beta3)},
      {"alpha_per_m", fiber_real(&FiberParams::alpha)},
      {"gamma_per_w_m",
       [](Parsed& p, std::string_view v) {
         p.gamma = to_double(v);
         return p.gamma.has_value();
       }},
      {"mode_field_diameter_m", real(&ExperimentConfig::mode_field_diameter)},
      {"n2_m2_per_w", real(&ExperimentConfig::n2)},
      {"pulse_fwhm_s", real(&ExperimentConfig::pulse_fwhm)},
      {"center_wavelength_m", real(&ExperimentConfig::center_wavelength)},
      {"energies_pj",
       [](Parsed& p, std::string_view v) {
         std::vector<double> out;
         while (!v.empty()) {
           const auto comma = v.find(',');
           auto x = to_double(v.substr(0, comma));
           if (!x) return false;
           out.push_back(*x);
           v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
         }
         p.cfg.energies_pj = std::move(out);
         return true;
       }},
      {"epsilon", real(&ExperimentConfig::epsilon)},
      {"kappa_spatial", real(&ExperimentConfig::kappa_spatial)},
      {"kappa_g_per_j_m", real(&ExperimentConfig::kappa_g)},
      {"eta_prop", real(&ExperimentConfig::eta_prop)},
      {"eta_det", real(&ExperimentConfig::eta_det)},
      {"phi_rel_rad", real(&ExperimentConfig::phi_rel)},
      {"grid_samples",
       [](Parsed& p, std::string_view v) {
         auto x = to_integer(v);
         if (!x || *x <= 0) return false;
         p.cfg.grid_samples = static_cast<std::size_t>(*x);
         return true;
       }},
      {"grid_window_s", real(&ExperimentConfig::grid_window)},
      {"n_steps",
       [](Parsed& p, std::string_view v) {
         auto x = to_integer(v);
         if (!x || *x <= 0 || *x > 100'000'000) return false;
         p.cfg.n_steps = static_cast<int>(*x);
         return true;
       }},
  };
  return table;
}

void resolve_gamma(ExperimentConfig& cfg, std::optional<double> gamma) {
  cfg.fiber.gamma = gamma ? *gamma
                          : gamma_from_mode_area(cfg.mode_field_diameter, cfg.center_wavelength, cfg.n2);
}

}  // namespace

void ExperimentConfig::validate() const {
  fiber.validate();
  if (energies_pj.empty()) throw InputError("config: energies_pj is empty");
  for (double e : energies_pj)
    if (!(e > 0.0)) throw InputError("config: energies must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InputError("config: epsilon must lie in [0, 1)");
  if (!(kappa_spatial > 0.0 && kappa_spatial <= 1.0))
    throw InputError("config: kappa_spatial must lie in (0, 1]");
  if (!(kappa_g >= 0.0)) throw InputError("config: kappa_g_per_j_m must be >= 0");
  if (!(eta_prop > 0.0 && eta_prop <= 1.0) || !(eta_det > 0.0 && eta_det <= 1.0))
    throw InputError("config: efficiencies must lie in (0, 1]");
  if (!(pulse_fwhm > 0.0) || !(center_wavelength > 0.0))
    throw InputError("config: pulse_fwhm_s and center_wavelength_m must be positive");
  if (n_steps < 100) throw InputError("config: n_steps must be >= 100");
  const TimeGrid grid(grid_samples, grid_window);
  if (grid.window() < 20.0 * pulse_fwhm) throw InputError("config: grid window shorter than 20 x FWHM");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.kappa_g = kDefaultKappaG;
  resolve_gamma(cfg, std::nullopt);
  return cfg;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
  Parsed parsed{default_config(), std::nullopt};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(source_name, line_no, "expected 'key = value'");
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(source_name, line_no, "unknown key '" + std::string(key) + "'");
    if (!it->second(parsed, value))
      throw ParseError(source_name, line_no, "bad value for '" + std::string(key) + "'");
  }
  resolve_gamma(parsed.cfg, parsed.gamma);
  parsed.cfg.validate();
  return parsed.cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open config file");
  return parse_config(in, path.string());
}

void print_default_config(std::ostream& out) {
  const auto cfg = default_config();
  char buf[128];
  auto put = [&](const char* key, double v, const char* comment) {
    std::snprintf(buf, sizeof buf, "%-22s = %.10g", key, v);
    out << buf << "   # " << comment << '\n';
  };
  out << "# Sagnac-loop polarization squeezing sweep configuration.\n"
         "# Lines are 'key = value'; '#' starts a comment; unknown keys are errors.\n\n"
         "# fiber\n";
  put("length_m", cfg.fiber.length, "fiber length");
  put("beta2_s2_per_m", cfg.fiber.beta2, "GVD at the center wavelength (anomalous < 0)");
  put("beta3_s3_per_m", cfg.fiber.beta3, "third-order dispersion");
  put("alpha_per_m", cfg.fiber.alpha, "power loss rate");
  put("mode_field_diameter_m", cfg.mode_field_diameter, "sets gamma with n2");
  put("n2_m2_per_w", cfg.n2, "fused silica");
  std::snprintf(buf, sizeof buf, "# gamma_per_w_m        = %.10g", cfg.fiber.gamma);
  out << buf << "   # overrides the mode-area value when set\n\n# pulses\n";
  put("center_wavelength_m", cfg.center_wavelength, "carrier");
  put("pulse_fwhm_s", cfg.pulse_fwhm, "sech^2 intensity FWHM");
  out << "energies_pj            = ";
  for (std::size_t k = 0; k < cfg.energies_pj.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.10g", k ? ", " : "", cfg.energies_pj[k]);
    out << buf;
  }
  out << "   # per-direction pulse energy of each sweep row\n";
  put("epsilon", cfg.epsilon, "coupling asymmetry between the two loop directions");
  out << "\n# noise and detection\n";
  put("kappa_spatial", cfg.kappa_spatial, "spatial mode-matching factor on the visibility");
  put("kappa_g_per_j_m", cfg.kappa_g, "excess phase noise per unit energy and length");
  put("eta_prop", cfg.eta_prop, "fiber-to-detector propagation efficiency");
  put("eta_det", cfg.eta_det, "photodiode quantum efficiency");
  put("phi_rel_rad", cfg.phi_rel, "relative phase of the counter-propagating pulses");
  out << "\n# numerics\n";
  put("grid_samples", static_cast<double>(cfg.grid_samples), "power of two");
  put("grid_window_s", cfg.grid_window, "time window");
  put("n_steps", cfg.n_steps, "split-step steps over the fiber");
}

}  // namespace pcfsq
