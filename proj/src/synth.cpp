#include "hdoa/synth.hpp"

#include <cmath>

namespace hdoa {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Complex circular_gaussian(Rng& rng, std::normal_distribution<double>& normal, double variance) {
  const double scale = std::sqrt(0.5 * variance);
  const double re = normal(rng);
  const double im = normal(rng);
  return {scale * re, scale * im};
}

} // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t axis, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(master) ^ axis) ^ trial);
}

RVector chain_component_rms(const ArrayGeometry& geom, const AnalogBeamformer& ab, double gamma,
                            double theta0) {
  const RVector gains = chain_gains(geom, ab, theta0);
  return ((gamma * gains.array() + 1.0) / 2.0).sqrt().matrix();
}

SnapshotBlock generate_snapshots(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                 const AdcProfile& profile, const SourceTruth& truth,
                                 std::uint64_t seed) {
  if (truth.snapshots < 1) throw ConfigError("synth: need at least one snapshot");
  if (!(truth.gamma >= 0.0) || !std::isfinite(truth.gamma))
    throw ConfigError("synth: gamma must be non-negative");
  if (profile.m_sub() != geom.m_sub() || ab.m_sub() != geom.m_sub())
    throw ConfigError("synth: beamformer/ADC profile do not match the geometry");

  const CVector response = apply_analog(ab, steering_vector(geom, truth.theta0));
  const RVector rms = chain_component_rms(geom, ab, truth.gamma, truth.theta0);
  const int ms = geom.m_sub();

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SnapshotBlock block;
  block.seed_trace = seed;
  block.data.resize(truth.snapshots, ms);
  CVector ideal(ms);
  for (int n = 0; n < truth.snapshots; ++n) {
    const Complex s = circular_gaussian(rng, normal, truth.gamma);
    for (int c = 0; c < ms; ++c) ideal[c] = response[c] * s + circular_gaussian(rng, normal, 1.0);
    block.data.row(n) = mixed_adc_apply(std::span<const Complex>(ideal.data(), ms), profile,
                                        std::span<const double>(rms.data(), ms))
                            .transpose();
  }
  return block;
}

SnapshotBlock noiseless_snapshots(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                  double theta0, std::span<const Complex> symbols) {
  const CVector response = apply_analog(ab, steering_vector(geom, theta0));
  SnapshotBlock block;
  block.data.resize(static_cast<Eigen::Index>(symbols.size()), response.size());
  for (std::size_t n = 0; n < symbols.size(); ++n)
    block.data.row(static_cast<Eigen::Index>(n)) = (response * symbols[n]).transpose();
  return block;
}

CMatrix sample_covariance(const SnapshotBlock& block) {
  if (block.snapshots() < 1) throw ConfigError("sample_covariance: empty block");
  CMatrix r = block.data.transpose() * block.data.conjugate();
  r /= static_cast<double>(block.snapshots());
  // Exact Hermitian symmetry.
  return 0.5 * (r + r.adjoint());
}

RVector chain_powers(const SnapshotBlock& block) {
  if (block.snapshots() < 1) throw ConfigError("chain_powers: empty block");
  return block.data.cwiseAbs2().colwise().mean().transpose();
}

} // namespace hdoa
