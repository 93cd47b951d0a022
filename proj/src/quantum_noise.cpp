#include "pcfsq/quantum_noise.hpp"

#include <cmath>
#include <numbers>

#include "pcfsq/errors.hpp"

namespace pcfsq {

namespace {
constexpr double kHeisenbergSlack = 1e-9;

bool in_unit_interval(double eta) { return eta > 0.0 && eta <= 1.0; }
}  // namespace

QuadCovariance::QuadCovariance(double xx, double xy, double yy) : xx_(xx), xy_(xy), yy_(yy) {
  if (!std::isfinite(xx) || !std::isfinite(xy) || !std::isfinite(yy))
    throw InputError("covariance entries must be finite");
  if (!(xx > 0.0 && yy > 0.0 && det() > 0.0)) throw InputError("covariance is not positive definite");
  if (det() < 1.0 - kHeisenbergSlack) throw InputError("covariance violates the uncertainty bound");
}

QuadCovariance QuadCovariance::rotated(double angle) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // R C R^T, R = [[c, -s], [s, c]]
  const double xx = c * c * xx_ - 2.0 * c * s * xy_ + s * s * yy_;
  const double yy = s * s * xx_ + 2.0 * c * s * xy_ + c * c * yy_;
  const double xy = c * s * (xx_ - yy_) + (c * c - s * s) * xy_;
  return {xx, xy, yy};
}

double QuadCovariance::variance_along(double angle) const noexcept {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * c * xx_ + 2.0 * c * s * xy_ + s * s * yy_;
}

EfficiencyChain EfficiencyChain::from_visibility(double eta_prop, double eta_det, double visibility) {
  EfficiencyChain chain{eta_prop, eta_det, visibility * visibility};
  chain.validate();
  return chain;
}

void EfficiencyChain::validate() const {
  if (!in_unit_interval(eta_prop) || !in_unit_interval(eta_det) || !in_unit_interval(eta_vis))
    throw InputError("efficiencies must lie in (0, 1]");
}

double purity(double v_sqz, double v_antisqz) { return 1.0 / std::sqrt(v_sqz * v_antisqz); }

double effective_length(const FiberParams& fiber) {
  const double al = fiber.alpha * fiber.length;
  if (al == 0.0) return fiber.length;
  return -std::expm1(-al) / fiber.alpha;
}

double nonlinear_phase(const PulseEnvelope& pulse, const FiberParams& fiber) {
  fiber.validate();
  return fiber.gamma * pulse.peak_power() * effective_length(fiber);
}

QuadCovariance kerr_covariance(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("kerr_covariance: r must be >= 0");
  return {1.0, 2.0 * r, 1.0 + 4.0 * r * r};
}

QuadCovariance add_phase_noise(const QuadCovariance& c, double n_ex) {
  if (!(n_ex >= 0.0) || !std::isfinite(n_ex)) throw InputError("add_phase_noise: n_ex must be >= 0");
  return {c.xx(), c.xy(), c.yy() + n_ex};
}

QuadCovariance combine_sagnac(const QuadCovariance& a, const QuadCovariance& b, double phi_rel) {
  const auto rb = phi_rel == 0.0 ? b : b.rotated(phi_rel);
  return {0.5 * (a.xx() + rb.xx()), 0.5 * (a.xy() + rb.xy()), 0.5 * (a.yy() + rb.yy())};
}

double apply_loss(double variance, double eta) {
  if (!in_unit_interval(eta)) throw InputError("apply_loss: eta must lie in (0, 1]");
  return eta * variance + (1.0 - eta);
}

QuadCovariance apply_loss(const QuadCovariance& c, double eta) {
  return {apply_loss(c.xx(), eta), eta * c.xy(), apply_loss(c.yy(), eta)};
}

SqueezingResult extremal_variances(const QuadCovariance& c) {
  const double mean = 0.5 * c.trace();
  const double half_diff = 0.5 * (c.xx() - c.yy());
  const double radius = std::hypot(half_diff, c.xy());

  SqueezingResult out;
  out.v_antisqz = mean + radius;
  // det / lambda_max avoids cancellation for strongly squeezed states.
  out.v_sqz = c.det() / out.v_antisqz;
  out.sqz_db = to_db(out.v_sqz);
  out.antisqz_db = to_db(out.v_antisqz);
  out.purity = purity(out.v_sqz, out.v_antisqz);

  if (radius == 0.0) {
    out.theta_min = 0.0;
  } else {
    const double major = 0.5 * std::atan2(c.xy(), half_diff);
    double minor = std::fmod(major + 0.5 * std::numbers::pi, std::numbers::pi);
    if (minor < 0.0) minor += std::numbers::pi;
    out.theta_min = minor;
  }
  return out;
}

double infer_lossless(double v_meas, double eta) {
  if (!in_unit_interval(eta)) throw InputError("infer_lossless: eta must lie in (0, 1]");
  if (!(v_meas > 1.0 - eta))
    throw InputError("infer_lossless: measured variance is below the vacuum floor 1 - eta");
  return 1.0 + (v_meas - 1.0) / eta;
}

double gawbs_noise(double pulse_energy, const FiberParams& fiber, double kappa_g) {
  if (!(pulse_energy >= 0.0) || !(kappa_g >= 0.0) || !(fiber.length >= 0.0))
    throw InputError("gawbs_noise: inputs must be >= 0");
  return kappa_g * pulse_energy * fiber.length;
}

}  // namespace pcfsq
