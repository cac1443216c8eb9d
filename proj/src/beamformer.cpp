#include "hdoa/beamformer.hpp"

#include <cmath>
#include <string>

#include "hdoa/synth.hpp"

namespace hdoa {

CMatrix AnalogBeamformer::matrix() const {
  const int ms = m_sub();
  const int ma = m_per();
  CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(ms) * ma, ms);
  for (int s = 0; s < ms; ++s) v.block(s * ma, s, ma, 1) = weights.row(s).transpose();
  return v;
}

double beamwidth_3db(const ArrayGeometry& geom) {
  return 50.8 * ArrayGeometry::wavelength() / (geom.m_per() * geom.spacing());
}

int min_subarrays_for_coverage(const ArrayGeometry& geom) {
  return static_cast<int>(std::ceil(180.0 / beamwidth_3db(geom)));
}

AnalogBeamformer design_coverage_ab(const ArrayGeometry& geom) {
  const int ms = geom.m_sub();
  const int ma = geom.m_per();
  const int needed = min_subarrays_for_coverage(geom);
  if (ms < needed)
    throw ConfigError("coverage beamformer: M_s = " + std::to_string(ms) + " < " +
                      std::to_string(needed) + " subarrays needed to cover [-90, 90] degrees");
  AnalogBeamformer ab;
  ab.mode = AbMode::coverage;
  ab.weights.resize(ms, ma);
  ab.beam_angles.resize(ms);
  const double scale = 1.0 / std::sqrt(static_cast<double>(ma));
  for (int s = 0; s < ms; ++s) {
    const double angle = (s + 1) * kPi / ms - kPi / 2 - kPi / (2.0 * ms);
    ab.beam_angles[s] = angle;
    // V_A^H applies exp(-j 2 pi (m_a - 1) d sin(theta_s) / lambda), aligning
    // chain s with a source at theta_s.
    const double k = 2.0 * kPi * std::sin(angle) / ArrayGeometry::wavelength();
    for (int e = 0; e < ma; ++e) ab.weights(s, e) = std::polar(scale, k * geom.position(e));
  }
  return ab;
}

AnalogBeamformer all_ones_ab(const ArrayGeometry& geom) {
  AnalogBeamformer ab;
  ab.mode = AbMode::all_ones;
  ab.weights = CMatrix::Constant(geom.m_sub(), geom.m_per(),
                                 Complex(1.0 / std::sqrt(static_cast<double>(geom.m_per())), 0.0));
  return ab;
}

CVector apply_analog(const AnalogBeamformer& ab, const CVector& antenna_signal) {
  const int ms = ab.m_sub();
  const int ma = ab.m_per();
  if (antenna_signal.size() != static_cast<Eigen::Index>(ms) * ma)
    throw ConfigError("apply_analog: signal length does not match M");
  CVector out(ms);
  // Eigen's dot() conjugates its left operand.
  for (int s = 0; s < ms; ++s)
    out[s] = ab.weights.row(s).transpose().dot(antenna_signal.segment(s * ma, ma));
  return out;
}

RVector chain_gains(const ArrayGeometry& geom, const AnalogBeamformer& ab, double theta) {
  const CVector chains = apply_analog(ab, steering_vector(geom, theta));
  return chains.cwiseAbs2();
}

double dirichlet_ratio(int m_per, double spacing, double sin_diff) {
  const double x = kPi * spacing * sin_diff / ArrayGeometry::wavelength();
  const double den = std::sin(x);
  if (std::abs(den) < 1e-12) return m_per * std::cos(m_per * x) / std::cos(x);
  return std::sin(m_per * x) / den;
}

Complex subarray_gain(const ArrayGeometry& geom, double theta0, double theta_ms) {
  const double du = std::sin(theta0) - std::sin(theta_ms);
  const int ma = geom.m_per();
  const double phase = kPi * (ma - 1) * geom.spacing() * du / ArrayGeometry::wavelength();
  return std::polar(dirichlet_ratio(ma, geom.spacing(), du) / std::sqrt(static_cast<double>(ma)),
                    phase);
}

DigitalCombiner DigitalCombiner::from_block(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                            const SnapshotBlock& block) {
  const int ms = ab.m_sub();
  if (block.data.cols() != ms) throw ConfigError("combiner: block width does not match M_s");
  DigitalCombiner c;
  c.phase_diag = CVector::Ones(ms);
  if (ab.mode == AbMode::coverage) {
    for (int s = 0; s < ms; ++s)
      c.phase_diag[s] = std::polar(1.0, kPi * (geom.m_per() - 1) * geom.spacing() *
                                            std::sin(ab.beam_angles[s]) /
                                            ArrayGeometry::wavelength());
  }
  c.energy_diag = chain_powers(block).cwiseSqrt();
  return c;
}

SnapshotBlock energy_normalize(const SnapshotBlock& chains, const DigitalCombiner& combiner) {
  const auto ms = chains.data.cols();
  if (combiner.phase_diag.size() != ms || combiner.energy_diag.size() != ms)
    throw ConfigError("energy_normalize: combiner size does not match the block");
  SnapshotBlock out{chains.data, chains.seed_trace};
  for (Eigen::Index s = 0; s < ms; ++s) {
    const double energy = combiner.energy_diag[s];
    if (!(energy > 0.0))
      throw NumericalError("energy_normalize: chain " + std::to_string(s) + " has zero power");
    out.data.col(s) *= combiner.phase_diag[s] / energy;
  }
  return out;
}

} // namespace hdoa
