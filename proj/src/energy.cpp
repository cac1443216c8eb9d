#include "hdoa/energy.hpp"

#include <cmath>
#include <initializer_list>

namespace hdoa {
namespace {

constexpr double kMilli = 1e-3;

} // namespace

void PowerModel::validate() const {
  for (double v : {p_aps, p_lna, p_mix, p_fil, p_ifa, p_syc, p_agc, v_dd, bandwidth, l_min, f_cor})
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("power model: every constant must be positive");
}

double adc_power(const PowerModel& model, int bits) {
  if (bits < 1) throw ConfigError("adc_power: bits must be >= 1");
  return 3.0 * model.v_dd * model.v_dd * model.l_min * (model.f_cor + 2.0 * model.bandwidth) /
         std::pow(10.0, -0.1525 * bits + 4.838);
}

PowerBudget total_power(const ArrayGeometry& geom, const AdcProfile& profile,
                        const PowerModel& model) {
  model.validate();
  if (profile.m_sub() != geom.m_sub())
    throw ConfigError("total_power: ADC profile does not match the number of subarrays");
  const double chi = profile.bits_low() == 1 ? 0.0 : 1.0;
  PowerBudget p;
  p.phase_shifters = geom.m_total() * model.p_aps * kMilli;
  p.rf_chains = (geom.m_sub() * (model.p_lna + model.p_mix + model.p_fil + model.p_ifa) +
                 model.p_syc) * kMilli;
  p.high_chains =
      profile.m_high() * (model.p_agc * kMilli + adc_power(model, profile.bits_high()));
  p.low_chains =
      profile.m_low() * (chi * model.p_agc * kMilli + adc_power(model, profile.bits_low()));
  p.p_total = p.phase_shifters + p.rf_chains + p.high_chains + p.low_chains;
  return p;
}

double energy_efficiency(double crlb_deg2, double p_total) {
  if (!(crlb_deg2 > 0.0) || !(p_total > 0.0))
    throw ConfigError("energy_efficiency: CRLB and power must be positive");
  return 1.0 / (std::sqrt(crlb_deg2) * p_total);
}

} // namespace hdoa
