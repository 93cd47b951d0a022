#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcfsq/config.hpp"
#include "pcfsq/quantum_noise.hpp"

namespace pcfsq {

// Classical part of one sweep row: both loop directions propagated and
// their output spectra compared. Independent of the noise parameters.
struct PropagatedPair {
  double energy_pj = 0.0;
  double v_max = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;
  std::optional<std::string> error;
};

struct SweepRow {
  double energy_pj = 0.0;
  double v_max = 0.0;
  double visibility = 0.0;
  double eta_vis = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;
  double sqz_db = 0.0;
  double antisqz_db = 0.0;
  double purity = 0.0;
  std::optional<std::string> error;
};

inline constexpr const char* kSweepCsvHeader =
    "energy_pJ,v_max,visibility,eta_vis,r_a,r_b,sqz_db,antisqz_db,purity";

// Propagates every energy of the config (rows in parallel, output ordered
// as in config.energies_pj). Numerical failures are recorded per row.
std::vector<PropagatedPair> propagate_pairs(const ExperimentConfig& config);

// Quantum-noise chain for one propagated pair.
SweepRow noise_row(const ExperimentConfig& config, const PropagatedPair& pair);

std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::span<const PropagatedPair> pairs);

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

struct Calibration {
  double kappa_g = 0.0;          // 1/(J m)
  double best_sqz_db = 0.0;
  double best_energy_pj = 0.0;
  std::size_t best_index = 0;
  double reference_energy_pj = 14.6;
  double n_ex_at_reference = 0.0;  // dark-mode excess noise, shot-noise units
};

// One-dimensional root find on kappa_g so that the best (most negative)
// sqz_db of the sweep equals target_sqz_db. The propagation is done once.
Calibration calibrate_kappa_g(const ExperimentConfig& config, double target_sqz_db);
Calibration calibrate_kappa_g(const ExperimentConfig& config, std::span<const PropagatedPair> pairs,
                              double target_sqz_db);

struct InferredPair {
  double sqz_db = 0.0;
  double antisqz_db = 0.0;
  double purity = 0.0;
};

// Loss-corrected squeezing/anti-squeezing from measured dB values.
InferredPair infer_from_db(double sqz_db, double antisqz_db, double eta);

}  // namespace pcfsq
