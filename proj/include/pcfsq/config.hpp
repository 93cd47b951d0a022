#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcfsq/pulse.hpp"

namespace pcfsq {

struct ExperimentConfig {
  // gamma is derived from mode_field_diameter, n2 and the center wavelength
  // unless gamma_per_w_m is given explicitly.
  FiberParams fiber{};
  double mode_field_diameter = 1.8e-6;  // m
  double n2 = 2.6e-20;                  // m^2/W

  double pulse_fwhm = 120e-15;        // s
  double center_wavelength = 810e-9;  // m
  std::vector<double> energies_pj{3, 6, 9, 12, 15, 18, 21, 24, 27, 30};

  // Pulse a carries E (1 + epsilon/2), pulse b carries E (1 - epsilon/2).
  double epsilon = 0.05;
  double kappa_spatial = 0.95;
  double kappa_g = 0.0;  // 1/(J m)
  double eta_prop = 0.95;
  double eta_det = 0.95;
  double phi_rel = 0.0;  // rad

  std::size_t grid_samples = 8192;
  double grid_window = 10e-12;  // s
  int n_steps = 1000;

  void validate() const;
};

ExperimentConfig default_config();

// "key = value" lines with '#' comments. Unknown keys are rejected.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::istream& in, const std::string& source_name);

// Every key with its default value; loading this text yields default_config().
void print_default_config(std::ostream& out);

}  // namespace pcfsq
