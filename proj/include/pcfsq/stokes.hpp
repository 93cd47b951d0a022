#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcfsq/quantum_noise.hpp"

namespace pcfsq {

struct StokesMean {
  double s0 = 1.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 1.0;
};

// Mean Stokes vector plus the fluctuations in the plane orthogonal to it.
// After the quarter-wave plate the mean is circular (S3 = S0) and the dark
// plane is S1-S2.
class StokesState {
 public:
  StokesState(StokesMean mean, QuadCovariance dark_cov);
  static StokesState circular(double s0, QuadCovariance dark_cov);

  const StokesMean& mean() const noexcept { return mean_; }
  const QuadCovariance& dark_cov() const noexcept { return dark_cov_; }

 private:
  StokesMean mean_;
  QuadCovariance dark_cov_;
};

// Electronic-spectrum-analyser settings. Carried along with a trace for
// bookkeeping; the noise model is frequency-flat.
struct TraceMetadata {
  double detection_frequency_hz = 17e6;
  double rbw_hz = 300e3;
  double vbw_hz = 300.0;
};

struct NoiseTrace {
  std::vector<double> angles;     // HWP angle, rad
  std::vector<double> variances;  // shot-noise units
  TraceMetadata metadata;

  double min_variance() const;
  double max_variance() const;
};

// Dark-plane variance seen by the PBS difference current when the HWP is at
// hwp_angle. A HWP rotation by theta turns the measured Stokes direction by
// 4 theta in the S1-S2 plane.
double stokes_variance(const StokesState& state, double hwp_angle);

// n_angles uniformly spaced HWP angles over one period [0, pi/4).
NoiseTrace sweep_hwp(const StokesState& state, int n_angles);

// Shot-noise reference in arbitrary detector units: proportional to the
// optical power and the detector gain.
double calibrate_qnl(double reference_power, double detector_gain);

// (v_raw - v_dark) / (v_qnl_raw - v_dark)
double dark_noise_correct(double v_raw, double v_dark, double v_qnl_raw);

// CSV with header "angle_rad,variance_snu".
void write_trace_csv(const NoiseTrace& trace, std::ostream& out);

}  // namespace pcfsq
