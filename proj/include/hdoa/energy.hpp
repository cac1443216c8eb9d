#pragma once

#include "hdoa/array_model.hpp"
#include "hdoa/quantizer.hpp"

namespace hdoa {

/// Front-end component powers. Component values are in mW; W is used
/// everywhere else.
struct PowerModel {
  double p_aps = 1.0;   // analog phase shifter
  double p_lna = 20.0;
  double p_mix = 30.3;
  double p_fil = 2.5;
  double p_ifa = 3.0;
  double p_syc = 50.5;  // frequency synthesizer, shared
  double p_agc = 2.0;
  double v_dd = 3.0;       // V
  double bandwidth = 20e6;  // Hz
  double l_min = 0.5e-6;   // m
  double f_cor = 1e6;      // Hz

  /// Throws ConfigError unless every field is positive and finite.
  void validate() const;
};

struct PowerBudget {
  double phase_shifters = 0.0;  // M P_APS
  double rf_chains = 0.0;       // M_s (P_LNA + P_m + P_f + P_IFA) + P_syc
  double high_chains = 0.0;     // M_0 (P_AGC + P_ADC(b_high))
  double low_chains = 0.0;      // M_1 (chi P_AGC + P_ADC(b))
  double p_total = 0.0;         // W
};

/// 3 V_dd^2 L_min (f_cor + 2 B) / 10^(-0.1525 b + 4.838), in W.
double adc_power(const PowerModel& model, int bits);

/// Low-resolution chains skip the AGC only for 1-bit ADCs.
PowerBudget total_power(const ArrayGeometry& geom, const AdcProfile& profile,
                        const PowerModel& model = {});

/// crlb_deg2^(-1/2) / p_total in 1/degree/W. Throws ConfigError on
/// non-positive inputs.
double energy_efficiency(double crlb_deg2, double p_total);

} // namespace hdoa
