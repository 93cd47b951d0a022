#pragma once

#include "pcfsq/pulse.hpp"

namespace pcfsq {

// 2x2 covariance of the (amplitude X, phase Y) quadratures of the dark mode
// in shot-noise units: the vacuum is the identity and det >= 1.
class QuadCovariance {
 public:
  QuadCovariance(double xx, double xy, double yy);
  static QuadCovariance identity() { return {1.0, 0.0, 1.0}; }
  static QuadCovariance diagonal(double xx, double yy) { return {xx, 0.0, yy}; }

  double xx() const noexcept { return xx_; }
  double xy() const noexcept { return xy_; }
  double yy() const noexcept { return yy_; }
  double det() const noexcept { return xx_ * yy_ - xy_ * xy_; }
  double trace() const noexcept { return xx_ + yy_; }

  // R(angle) C R(angle)^T
  QuadCovariance rotated(double angle) const;
  // u^T C u with u = (cos angle, sin angle)
  double variance_along(double angle) const noexcept;

 private:
  double xx_;
  double xy_;
  double yy_;
};

// Detection efficiencies; eta_vis is the squared interference visibility.
struct EfficiencyChain {
  double eta_prop = 0.95;
  double eta_det = 0.95;
  double eta_vis = 1.0;

  static EfficiencyChain from_visibility(double eta_prop, double eta_det, double visibility);
  double total() const noexcept { return eta_prop * eta_det * eta_vis; }
  void validate() const;
};

struct SqueezingResult {
  double v_sqz = 1.0;
  double v_antisqz = 1.0;
  double sqz_db = 0.0;
  double antisqz_db = 0.0;
  double theta_min = 0.0;  // rad, in [0, pi)
  double purity = 1.0;
};

inline double to_db(double v) { return 10.0 * std::log10(v); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

// [v_sqz * v_antisqz]^(-1/2)
double purity(double v_sqz, double v_antisqz);

// (1 - exp(-alpha L)) / alpha, or L for a lossless fiber.
double effective_length(const FiberParams& fiber);

// Kerr parameter r = gamma * P0 * L_eff from the input peak power.
double nonlinear_phase(const PulseEnvelope& pulse, const FiberParams& fiber);

// Linearized Kerr map X -> X, Y -> Y + 2 r X applied to the vacuum.
QuadCovariance kerr_covariance(double r);

// Uncorrelated excess noise in the phase quadrature.
QuadCovariance add_phase_noise(const QuadCovariance& c, double n_ex);

// Dark port of the loop: (a - e^{i phi} b) / sqrt 2 for independent a, b.
QuadCovariance combine_sagnac(const QuadCovariance& a, const QuadCovariance& b, double phi_rel);

// Beam-splitter loss: eta C + (1 - eta) I.
QuadCovariance apply_loss(const QuadCovariance& c, double eta);
double apply_loss(double variance, double eta);

SqueezingResult extremal_variances(const QuadCovariance& c);

// Undo apply_loss on a single variance: 1 + (v - 1) / eta.
double infer_lossless(double v_meas, double eta);

// Phenomenological GAWBS/Raman phase noise, linear in energy and length.
double gawbs_noise(double pulse_energy, const FiberParams& fiber, double kappa_g);

}  // namespace pcfsq
