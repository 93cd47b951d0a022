#include "pcfsq/experiment.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "pcfsq/errors.hpp"
#include "pcfsq/pulse.hpp"
#include "pcfsq/spectrum.hpp"

namespace pcfsq {

namespace {

constexpr double kJoulePerPicojoule = 1e-12;

PropagatedPair propagate_pair(const ExperimentConfig& config, const TimeGrid& grid, double energy_pj) {
  PropagatedPair pair;
  pair.energy_pj = energy_pj;
  const double energy = energy_pj * kJoulePerPicojoule;
  const auto a = make_sech_pulse(energy * (1.0 + 0.5 * config.epsilon), config.pulse_fwhm,
                                 config.center_wavelength, grid);
  const auto b = make_sech_pulse(energy * (1.0 - 0.5 * config.epsilon), config.pulse_fwhm,
                                 config.center_wavelength, grid);
  pair.r_a = nonlinear_phase(a, config.fiber);
  pair.r_b = nonlinear_phase(b, config.fiber);
  try {
    const auto out_a = propagate(a, config.fiber, config.n_steps);
    // epsilon = 0 gives two identical runs; reuse the first.
    const auto sa = spectrum(out_a);
    const auto sb = config.epsilon == 0.0 ? sa : spectrum(propagate(b, config.fiber, config.n_steps));
    pair.v_max = spectral_overlap(sa, sb).v_max;
  } catch (const NumericalError& e) {
    pair.error = e.what();
  }
  return pair;
}

double best_sqz_db(std::span<const SweepRow> rows, std::size_t* index = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].error || !(rows[k].sqz_db < best)) continue;
    best = rows[k].sqz_db;
    if (index) *index = k;
  }
  return best;
}

}  // namespace

std::vector<PropagatedPair> propagate_pairs(const ExperimentConfig& config) {
  config.validate();
  const TimeGrid grid(config.grid_samples, config.grid_window);
  const auto n = static_cast<std::ptrdiff_t>(config.energies_pj.size());
  std::vector<PropagatedPair> pairs(config.energies_pj.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      pairs[k] = propagate_pair(config, grid, config.energies_pj[k]);
    } catch (const std::exception& e) {
      pairs[k].energy_pj = config.energies_pj[k];
      pairs[k].error = e.what();
    }
  }
  return pairs;
}

SweepRow noise_row(const ExperimentConfig& config, const PropagatedPair& pair) {
  SweepRow row;
  row.energy_pj = pair.energy_pj;
  row.r_a = pair.r_a;
  row.r_b = pair.r_b;
  if (pair.error) {
    row.error = pair.error;
    return row;
  }
  row.v_max = pair.v_max;
  row.visibility = predicted_visibility(pair.v_max, config.kappa_spatial);
  row.eta_vis = row.visibility * row.visibility;

  const double energy = pair.energy_pj * kJoulePerPicojoule;
  const auto ca = add_phase_noise(
      kerr_covariance(pair.r_a), gawbs_noise(energy * (1.0 + 0.5 * config.epsilon), config.fiber, config.kappa_g));
  const auto cb = add_phase_noise(
      kerr_covariance(pair.r_b), gawbs_noise(energy * (1.0 - 0.5 * config.epsilon), config.fiber, config.kappa_g));

  // Zero visibility leaves nothing but vacuum in the dark port.
  if (row.eta_vis <= 0.0) {
    row.sqz_db = row.antisqz_db = 0.0;
    row.purity = 1.0;
    return row;
  }
  // The loss stages commute; applied in the order light meets them.
  auto dark = combine_sagnac(ca, cb, config.phi_rel);
  dark = apply_loss(dark, row.eta_vis);
  dark = apply_loss(dark, config.eta_prop);
  dark = apply_loss(dark, config.eta_det);

  const auto sq = extremal_variances(dark);
  row.sqz_db = sq.sqz_db;
  row.antisqz_db = sq.antisqz_db;
  row.purity = sq.purity;
  return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::span<const PropagatedPair> pairs) {
  std::vector<SweepRow> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) rows.push_back(noise_row(config, p));
  return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  const auto pairs = propagate_pairs(config);
  return run_sweep(config, pairs);
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  char buf[320];
  for (const auto& r : rows) {
    if (r.error) {
      std::snprintf(buf, sizeof buf, "%.10g,nan,nan,nan,%.10g,%.10g,nan,nan,nan\n", r.energy_pj, r.r_a, r.r_b);
    } else {
      std::snprintf(buf, sizeof buf, "%.10g,%.10f,%.10f,%.10f,%.10g,%.10g,%.6f,%.6f,%.10f\n", r.energy_pj,
                    r.v_max, r.visibility, r.eta_vis, r.r_a, r.r_b, r.sqz_db, r.antisqz_db, r.purity);
    }
    out << buf;
  }
}

Calibration calibrate_kappa_g(const ExperimentConfig& config, std::span<const PropagatedPair> pairs,
                              double target_sqz_db) {
  auto best_at = [&](double kappa_g) {
    auto cfg = config;
    cfg.kappa_g = kappa_g;
    return best_sqz_db(run_sweep(cfg, pairs));
  };

  const double floor_db = best_at(0.0);
  if (!std::isfinite(floor_db)) throw NumericalError("calibrate_kappa_g: every sweep row failed");
  if (floor_db > target_sqz_db)
    throw InputError("calibrate_kappa_g: target squeezing is beyond what the noiseless sweep reaches");

  // best_sqz_db is nondecreasing in kappa_g; bracket in log space.
  double hi = 1e9;
  while (best_at(hi) < target_sqz_db) {
    hi *= 10.0;
    if (hi > 1e30) throw NumericalError("calibrate_kappa_g: could not bracket the target");
  }
  double lo = hi / 10.0;
  while (lo > 1e-6 && best_at(lo) > target_sqz_db) lo /= 10.0;

  auto f = [&](double log_kappa) { return best_at(std::exp(log_kappa)) - target_sqz_db; };
  boost::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, std::log(lo), std::log(hi), boost::math::tools::eps_tolerance<double>(40), max_iter);

  Calibration cal;
  cal.kappa_g = std::exp(0.5 * (a + b));
  auto cfg = config;
  cfg.kappa_g = cal.kappa_g;
  const auto rows = run_sweep(cfg, pairs);
  cal.best_sqz_db = best_sqz_db(rows, &cal.best_index);
  cal.best_energy_pj = rows[cal.best_index].energy_pj;
  cal.n_ex_at_reference = gawbs_noise(cal.reference_energy_pj * kJoulePerPicojoule, config.fiber, cal.kappa_g);
  return cal;
}

Calibration calibrate_kappa_g(const ExperimentConfig& config, double target_sqz_db) {
  const auto pairs = propagate_pairs(config);
  return calibrate_kappa_g(config, pairs, target_sqz_db);
}

InferredPair infer_from_db(double sqz_db, double antisqz_db, double eta) {
  const double v_sqz = infer_lossless(from_db(sqz_db), eta);
  const double v_anti = infer_lossless(from_db(antisqz_db), eta);
  return {to_db(v_sqz), to_db(v_anti), purity(v_sqz, v_anti)};
}

}  // namespace pcfsq
