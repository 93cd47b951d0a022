// Command-line front end: energy sweeps, spectral overlap of spectrometer
// files, loss inference, single-pulse propagation, HWP noise traces.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pcfsq/config.hpp"
#include "pcfsq/errors.hpp"
#include "pcfsq/experiment.hpp"
#include "pcfsq/pulse.hpp"
#include "pcfsq/spectrum.hpp"
#include "pcfsq/stokes.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

pcfsq::ExperimentConfig config_or_default(const std::string& path) {
  return path.empty() ? pcfsq::default_config() : pcfsq::load_config(path);
}

template <typename Write>
void to_file_or_stdout(const std::string& path, Write&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw pcfsq::InputError("cannot write " + path);
  write(out);
  if (!out) throw pcfsq::InputError("write failed: " + path);
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              std::optional<double> calibrate_db) {
  auto cfg = config_or_default(config_path);
  const auto pairs = pcfsq::propagate_pairs(cfg);
  if (calibrate_db) {
    const auto cal = pcfsq::calibrate_kappa_g(cfg, pairs, *calibrate_db);
    cfg.kappa_g = cal.kappa_g;
    std::fprintf(stderr,
                 "calibrated kappa_g_per_j_m = %.10g (best %.3f dB at %.4g pJ; n_ex at %.4g pJ = %.6g)\n",
                 cal.kappa_g, cal.best_sqz_db, cal.best_energy_pj, cal.reference_energy_pj,
                 cal.n_ex_at_reference);
  }
  const auto rows = pcfsq::run_sweep(cfg, pairs);
  to_file_or_stdout(out_path, [&](std::ostream& os) { pcfsq::write_sweep_csv(rows, os); });
  int failed = 0;
  for (const auto& r : rows) {
    if (!r.error) continue;
    ++failed;
    std::fprintf(stderr, "row %.6g pJ failed: %s\n", r.energy_pj, r.error->c_str());
  }
  return failed ? kExitNumerical : 0;
}

int cmd_overlap(const std::string& file_p, const std::string& file_s) {
  const auto p = pcfsq::load_spectrometer_file(file_p);
  const auto s = pcfsq::load_spectrometer_file(file_s);
  for (const auto* loaded : {&p, &s})
    if (loaded->clamped_rows)
      std::fprintf(stderr, "warning: %zu negative intensities clamped to zero in %s\n", loaded->clamped_rows,
                   loaded == &p ? file_p.c_str() : file_s.c_str());
  const auto [sp, ss] = pcfsq::on_common_grid(p.spectrum, s.spectrum);
  const auto report = pcfsq::spectral_overlap(sp, ss);
  std::printf("v_max = %.4f\n", report.v_max);
  return 0;
}

int cmd_infer(double sqz_db, double antisqz_db, double eta) {
  auto infer_one = [eta](const char* label, double db) -> std::optional<double> {
    try {
      const double v = pcfsq::infer_lossless(pcfsq::from_db(db), eta);
      std::printf("inferred %s = %.2f dB\n", label, pcfsq::to_db(v));
      return v;
    } catch (const pcfsq::InputError& e) {
      std::printf("inferred %s = unphysical\n", label);
      std::fprintf(stderr, "error: %s: %s\n", label, e.what());
      return std::nullopt;
    }
  };
  const auto v_sqz = infer_one("squeezing", sqz_db);
  const auto v_anti = infer_one("anti-squeezing", antisqz_db);
  if (!v_sqz || !v_anti) return kExitInput;
  std::printf("inferred purity = %.4f\n", pcfsq::purity(*v_sqz, *v_anti));
  return 0;
}

int cmd_propagate(const std::string& config_path, double energy_pj, const std::string& out_path) {
  const auto cfg = config_or_default(config_path);
  const pcfsq::TimeGrid grid(cfg.grid_samples, cfg.grid_window);
  const auto in = pcfsq::make_sech_pulse(energy_pj * 1e-12, cfg.pulse_fwhm, cfg.center_wavelength, grid);
  const auto out = pcfsq::propagate(in, cfg.fiber, cfg.n_steps);
  const auto sp = pcfsq::spectrum(out);
  to_file_or_stdout(out_path, [&](std::ostream& os) { pcfsq::write_spectrometer(sp, os); });
  std::fprintf(stderr, "rms spectral width: input %.6g rad/s, output %.6g rad/s\n",
               pcfsq::rms_width(pcfsq::spectrum(in)), pcfsq::rms_width(sp));
  return 0;
}

int cmd_trace(const std::string& config_path, double energy_pj, int n_angles, const std::string& out_path) {
  auto cfg = config_or_default(config_path);
  cfg.energies_pj = {energy_pj};
  const auto pairs = pcfsq::propagate_pairs(cfg);
  if (pairs.front().error) throw pcfsq::NumericalError(*pairs.front().error);
  const auto& pair = pairs.front();
  const double e = energy_pj * 1e-12;
  const auto ca = pcfsq::add_phase_noise(pcfsq::kerr_covariance(pair.r_a),
                                         pcfsq::gawbs_noise(e * (1 + 0.5 * cfg.epsilon), cfg.fiber, cfg.kappa_g));
  const auto cb = pcfsq::add_phase_noise(pcfsq::kerr_covariance(pair.r_b),
                                         pcfsq::gawbs_noise(e * (1 - 0.5 * cfg.epsilon), cfg.fiber, cfg.kappa_g));
  const double vis = pcfsq::predicted_visibility(pair.v_max, cfg.kappa_spatial);
  auto dark = pcfsq::combine_sagnac(ca, cb, cfg.phi_rel);
  for (double eta : {vis * vis, cfg.eta_prop, cfg.eta_det}) dark = pcfsq::apply_loss(dark, eta);
  const auto trace = pcfsq::sweep_hwp(pcfsq::StokesState::circular(1.0, dark), n_angles);
  to_file_or_stdout(out_path, [&](std::ostream& os) { pcfsq::write_trace_csv(trace, os); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization squeezing in a fiber Sagnac loop: sweeps, overlaps, loss inference"};
  app.require_subcommand(0, 1);

  bool print_default = false;
  app.add_flag("--print-default-config", print_default, "Print every config key with its default and exit");

  std::string config_path;
  std::string out_path;

  auto* sweep = app.add_subcommand("sweep", "Energy sweep of overlap, visibility and squeezing (CSV)");
  std::optional<double> calibrate_db;
  sweep->add_option("--config", config_path, "Config file (key = value)");
  sweep->add_option("--out", out_path, "Output CSV (default stdout)");
  sweep->add_option("--calibrate-sqz-db", calibrate_db,
                    "Fit kappa_g so the best squeezing of the sweep equals this value");

  auto* overlap = app.add_subcommand("overlap", "Spectral overlap bound of two spectrometer files");
  std::string file_p;
  std::string file_s;
  overlap->add_option("file_p", file_p, "First spectrum")->required();
  overlap->add_option("file_s", file_s, "Second spectrum")->required();

  auto* infer = app.add_subcommand("infer", "Correct measured squeezing for a detection efficiency");
  double sqz_db = 0.0;
  double antisqz_db = 0.0;
  double eta = 1.0;
  infer->add_option("--sqz", sqz_db, "Measured squeezing (dB)")->required();
  infer->add_option("--antisqz", antisqz_db, "Measured anti-squeezing (dB)")->required();
  infer->add_option("--eta", eta, "Total efficiency to correct for")->required();

  auto* prop = app.add_subcommand("propagate", "Propagate one pulse and write its output spectrum");
  double energy_pj = 0.0;
  prop->add_option("--energy-pj", energy_pj, "Pulse energy (pJ)")->required();
  prop->add_option("--out", out_path, "Spectrum file (default stdout)");
  prop->add_option("--config", config_path, "Config file for fiber and grid");

  auto* trace = app.add_subcommand("trace", "HWP-angle noise trace of the dark plane at one energy (CSV)");
  int n_angles = 360;
  trace->add_option("--energy-pj", energy_pj, "Pulse energy (pJ)")->required();
  trace->add_option("--angles", n_angles, "Number of HWP angles over one period");
  trace->add_option("--out", out_path, "Output CSV (default stdout)");
  trace->add_option("--config", config_path, "Config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (print_default) {
      pcfsq::print_default_config(std::cout);
      return 0;
    }
    if (*sweep) return cmd_sweep(config_path, out_path, calibrate_db);
    if (*overlap) return cmd_overlap(file_p, file_s);
    if (*infer) return cmd_infer(sqz_db, antisqz_db, eta);
    if (*prop) return cmd_propagate(config_path, energy_pj, out_path);
    if (*trace) return cmd_trace(config_path, energy_pj, n_angles, out_path);
    std::cerr << app.help();
    return kExitInput;
  } catch (const pcfsq::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const pcfsq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
