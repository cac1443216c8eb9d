#include "hdoa/crlb.hpp"

#include <cmath>

#include <Eigen/LU>

namespace hdoa {
namespace {

void require_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("crlb: gamma must be >= 0");
}

void require_match(const ArrayGeometry& geom, const AdcProfile& profile) {
  if (profile.m_sub() != geom.m_sub())
    throw ConfigError("crlb: ADC profile does not match the number of subarrays");
}

} // namespace

ClosedFormIngredients closed_form_ingredients(const ArrayGeometry& geom, const AdcProfile& profile,
                                              double gamma, double theta0) {
  require_valid_direction(theta0);
  require_gamma(gamma);
  require_match(geom, profile);

  ClosedFormIngredients c;
  const int ma = geom.m_per();
  const double k = 2.0 * kPi * std::sin(theta0) / ArrayGeometry::wavelength();
  // Direct summation; the ratio form is 0/0 at broadside.
  for (int e = 0; e < ma; ++e) {
    const Complex term = std::polar(1.0, k * geom.position(e));
    c.zeta += term;
    c.gamma_cap += geom.position(e) * term;
  }
  const double zeta2 = std::norm(c.zeta);

  const double alpha = profile.alpha();
  const double sigma_q2 = quant_noise_variance(profile, gamma, zeta2, ma);
  const double w = alpha * alpha / (alpha * alpha + sigma_q2);
  c.xi = profile.m_high() + w * profile.m_low();

  for (int s = 0; s < geom.m_sub(); ++s) {
    const double start = geom.position(s * ma);
    const double weight = s < profile.m_high() ? 1.0 : w;
    c.mu += weight * start;
    c.nu += weight * start * start;
  }

  c.den = gamma * c.xi * zeta2 + ma;
  const Complex cross = std::conj(c.gamma_cap) * c.zeta;
  c.phi = zeta2 * zeta2 * (c.xi * c.nu - c.mu * c.mu) * c.den +
          ma * c.xi * c.xi * (zeta2 * std::norm(c.gamma_cap) - std::real(cross * cross));
  return c;
}

FisherEntries fim_closed_form(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                              double theta0) {
  const ClosedFormIngredients c = closed_form_ingredients(geom, profile, gamma, theta0);
  const double zeta2 = std::norm(c.zeta);
  const double lambda = ArrayGeometry::wavelength();
  const double cos_t = std::cos(theta0);

  FisherEntries f;
  const double g = c.xi * zeta2 / c.den;
  f.gg = g * g;
  f.gt = 0.0;
  f.tt = 8.0 * kPi * kPi * gamma * gamma * cos_t * cos_t /
         (lambda * lambda * geom.m_per() * c.den * c.den) * c.phi;
  return f;
}

CrlbValue crlb_theta(const FisherEntries& fim, int snapshots) {
  if (snapshots < 1) throw ConfigError("crlb: need at least one snapshot");
  if (!(fim.tt > 0.0) || !std::isfinite(fim.tt))
    throw NumericalError("crlb: non-positive Fisher information, variance is unbounded");
  CrlbValue v;
  v.rad2 = 1.0 / (snapshots * fim.tt);
  v.deg2 = v.rad2 * kRad2ToDeg2;
  return v;
}

CrlbValue crlb_theta_joint(const FisherEntries& fim, int snapshots) {
  if (snapshots < 1) throw ConfigError("crlb: need at least one snapshot");
  const double det = fim.gg * fim.tt - fim.gt * fim.gt;
  if (!(fim.gg > 0.0) || !(det > 0.0) || !std::isfinite(det))
    throw NumericalError("crlb: Fisher information is not positive definite");
  CrlbValue v;
  v.rad2 = fim.gg / (det * snapshots);
  v.deg2 = v.rad2 * kRad2ToDeg2;
  return v;
}

CMatrix model_covariance(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                         const AdcProfile& profile, double gamma, double theta0) {
  require_valid_direction(theta0);
  require_gamma(gamma);
  require_match(geom, profile);
  if (ab.m_sub() != geom.m_sub() || ab.m_per() != geom.m_per())
    throw ConfigError("crlb: beamformer does not match the geometry");

  const CMatrix va = ab.matrix();
  const int ms = geom.m_sub();
  RVector t = RVector::Ones(ms);
  RVector q = RVector::Zero(ms);
  const CVector x = va.adjoint() * steering_vector(geom, theta0);
  for (int s = profile.m_high(); s < ms; ++s) {
    t[s] = profile.alpha();
    q[s] = profile.alpha() * profile.beta() * (gamma * std::norm(x[s]) + 1.0);
  }
  const CVector tx = t.cast<Complex>().cwiseProduct(x);
  CMatrix r = gamma * tx * tx.adjoint();
  r += t.asDiagonal() * (va.adjoint() * va) * t.asDiagonal();
  r += q.cast<Complex>().asDiagonal();
  return r;
}

FisherEntries fim_numerical_oracle(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                   const AdcProfile& profile, double gamma, double theta0) {
  const CMatrix r = model_covariance(geom, ab, profile, gamma, theta0);
  const CMatrix va = ab.matrix();
  const int ms = geom.m_sub();
  RVector t = RVector::Ones(ms);
  for (int s = profile.m_high(); s < ms; ++s) t[s] = profile.alpha();

  const CVector tx = t.cast<Complex>().cwiseProduct(va.adjoint() * steering_vector(geom, theta0));
  const CVector txd =
      t.cast<Complex>().cwiseProduct(va.adjoint() * steering_derivative(geom, theta0));
  const CMatrix d_gamma = tx * tx.adjoint();
  const CMatrix d_theta = gamma * (txd * tx.adjoint() + tx * txd.adjoint());

  const Eigen::FullPivLU<CMatrix> lu(r);
  if (!lu.isInvertible()) throw NumericalError("crlb: singular model covariance");
  const CMatrix r_inv = lu.inverse();
  const CMatrix a = r_inv * d_gamma;
  const CMatrix b = r_inv * d_theta;

  FisherEntries f;
  f.gg = (a * a).trace().real();
  f.gt = (a * b).trace().real();
  f.tt = (b * b).trace().real();
  return f;
}

double performance_loss(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                        double theta0) {
  const ClosedFormIngredients c = closed_form_ingredients(geom, profile, gamma, theta0);
  if (!(c.phi > 0.0)) throw NumericalError("performance_loss: degenerate Fisher information");
  const double m = geom.m_total();
  const double d = geom.spacing() / ArrayGeometry::wavelength();
  return geom.m_per() * m * m * d * d * (m * m - 1.0) * c.den * c.den /
         (12.0 * (gamma * m + 1.0) * c.phi);
}

double performance_loss_ratio(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                              double theta0) {
  const ArrayGeometry ideal_geom(geom.m_total(), 1, geom.spacing());
  const AdcProfile ideal = AdcProfile::make(profile.bits_low(), geom.m_total(), 1.0,
                                            profile.bits_high());
  const double f_ideal = fim_closed_form(ideal_geom, ideal, gamma, theta0).tt;
  const double f = fim_closed_form(geom, profile, gamma, theta0).tt;
  if (!(f > 0.0)) throw NumericalError("performance_loss: degenerate Fisher information");
  return f_ideal / f;
}

FisherReport closed_form_report(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                                double theta0, int snapshots) {
  FisherReport r;
  r.entries = fim_closed_form(geom, profile, gamma, theta0);
  const CrlbValue v = crlb_theta(r.entries, snapshots);
  r.crlb_rad2 = v.rad2;
  r.crlb_deg2 = v.deg2;
  r.eta_pl = performance_loss(geom, profile, gamma, theta0);
  return r;
}

} // namespace hdoa
