#include "pcfsq/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "pcfsq/errors.hpp"

namespace pcfsq {

StokesState::StokesState(StokesMean mean, QuadCovariance dark_cov)
    : mean_(mean), dark_cov_(dark_cov) {
  if (!(mean_.s0 > 0.0) || !std::isfinite(mean_.s0)) throw InputError("Stokes S0 must be positive");
  const double polarized = std::sqrt(mean_.s1 * mean_.s1 + mean_.s2 * mean_.s2 + mean_.s3 * mean_.s3);
  if (polarized > mean_.s0 * (1.0 + 1e-12)) throw InputError("Stokes vector exceeds S0");
}

StokesState StokesState::circular(double s0, QuadCovariance dark_cov) {
  return StokesState({s0, 0.0, 0.0, s0}, dark_cov);
}

double NoiseTrace::min_variance() const {
  if (variances.empty()) throw InputError("empty noise trace");
  return *std::min_element(variances.begin(), variances.end());
}

double NoiseTrace::max_variance() const {
  if (variances.empty()) throw InputError("empty noise trace");
  return *std::max_element(variances.begin(), variances.end());
}

double stokes_variance(const StokesState& state, double hwp_angle) {
  return state.dark_cov().variance_along(4.0 * hwp_angle);
}

NoiseTrace sweep_hwp(const StokesState& state, int n_angles) {
  if (n_angles < 8) throw InputError("sweep_hwp: need at least 8 angles");
  NoiseTrace trace;
  trace.angles.resize(static_cast<std::size_t>(n_angles));
  trace.variances.resize(trace.angles.size());
  const double period = 0.25 * std::numbers::pi;
  for (int k = 0; k < n_angles; ++k) {
    const double theta = period * k / n_angles;
    trace.angles[k] = theta;
    trace.variances[k] = stokes_variance(state, theta);
  }
  return trace;
}

double calibrate_qnl(double reference_power, double detector_gain) {
  if (!(reference_power > 0.0) || !std::isfinite(reference_power))
    throw InputError("calibrate_qnl: reference power must be positive");
  if (!(detector_gain > 0.0) || !std::isfinite(detector_gain))
    throw InputError("calibrate_qnl: detector gain must be positive");
  return reference_power * detector_gain;
}

double dark_noise_correct(double v_raw, double v_dark, double v_qnl_raw) {
  if (!(v_dark >= 0.0)) throw InputError("dark_noise_correct: dark noise must be >= 0");
  if (!(v_qnl_raw > v_dark)) throw InputError("dark_noise_correct: QNL is not above the dark noise");
  if (!(v_raw > v_dark)) throw InputError("dark_noise_correct: signal is not above the dark noise");
  return (v_raw - v_dark) / (v_qnl_raw - v_dark);
}

void write_trace_csv(const NoiseTrace& trace, std::ostream& out) {
  out << "angle_rad,variance_snu\n";
  char buf[64];
  for (std::size_t k = 0; k < trace.angles.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", trace.angles[k], trace.variances[k]);
    out << buf;
  }
}

}  // namespace pcfsq
