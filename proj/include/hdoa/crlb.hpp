#pragma once

#include "hdoa/array_model.hpp"
#include "hdoa/beamformer.hpp"
#include "hdoa/quantizer.hpp"
#include "hdoa/types.hpp"

namespace hdoa {

/// Scalar building blocks of the closed-form Fisher information for the
/// all-ones analog beamformer.
struct ClosedFormIngredients {
  Complex zeta;       // sum_ma exp(j 2 pi d_ma sin(theta0))
  double xi = 0.0;    // M_0 + w M_1, w = alpha^2 / (alpha^2 + sigma_q^2)
  Complex gamma_cap;  // sum_ma d_ma exp(j 2 pi d_ma sin(theta0))
  double mu = 0.0;    // weighted sum of subarray start positions
  double nu = 0.0;    // weighted sum of their squares
  double phi = 0.0;
  double den = 0.0;   // gamma xi |zeta|^2 + M_a
};

/// Per-snapshot Fisher entries. The closed form sets gt = 0; the oracle
/// returns the exact value, which is nonzero for M_a > 1 off broadside
/// because the beam gain |zeta(theta)|^2 varies with theta.
struct FisherEntries {
  double gg = 0.0;
  double gt = 0.0;
  double tt = 0.0;
};

struct FisherReport {
  FisherEntries entries;
  double crlb_rad2 = 0.0;
  double crlb_deg2 = 0.0;
  double eta_pl = 0.0;
};

struct CrlbValue {
  double rad2 = 0.0;
  double deg2 = 0.0;
};

ClosedFormIngredients closed_form_ingredients(const ArrayGeometry& geom, const AdcProfile& profile,
                                              double gamma, double theta0);

FisherEntries fim_closed_form(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                              double theta0);

/// 1 / (N F_tt). Throws NumericalError when F_tt <= 0 and ConfigError for N < 1.
CrlbValue crlb_theta(const FisherEntries& fim, int snapshots);

/// [F^-1]_tt / N with gamma as a nuisance parameter; equals crlb_theta when
/// F_gt = 0. Throws NumericalError unless F is positive definite.
CrlbValue crlb_theta_joint(const FisherEntries& fim, int snapshots);

/// y = T V_A^H (a s + n) + q:
/// R_y = gamma T V_A^H a a^H V_A T + T V_A^H V_A T + Q.
/// Q holds alpha beta (gamma |v_s^H a_s|^2 + 1) on low-resolution chains.
CMatrix model_covariance(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                         const AdcProfile& profile, double gamma, double theta0);

/// Trace-form Fisher entries Re tr(R^-1 dR_i R^-1 dR_j) with a dense inverse.
/// Q is held fixed when differentiating with respect to gamma.
FisherEntries fim_numerical_oracle(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                   const AdcProfile& profile, double gamma, double theta0);

/// CRLB of the configuration over the CRLB of the fully digital,
/// unquantized array with the same M, d, gamma and theta0.
double performance_loss(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                        double theta0);

/// Same quantity as the ratio of two closed-form CRLBs.
double performance_loss_ratio(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                              double theta0);

/// Closed-form entries, CRLB for N snapshots and performance loss in one report.
FisherReport closed_form_report(const ArrayGeometry& geom, const AdcProfile& profile, double gamma,
                                double theta0, int snapshots);

} // namespace hdoa
