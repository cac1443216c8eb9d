#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "hdoa/array_model.hpp"
#include "hdoa/beamformer.hpp"
#include "hdoa/quantizer.hpp"
#include "hdoa/types.hpp"

namespace hdoa {

struct SourceTruth {
  double theta0 = 0.0;  // radians
  double gamma = 1.0;   // linear SNR, noise power fixed to 1
  int snapshots = 32;
};

/// N x M_s post-ADC chain outputs; row n is y(n)^T.
struct SnapshotBlock {
  CMatrix data;
  std::uint64_t seed_trace = 0;  // seed of the generator that produced the block

  Eigen::Index snapshots() const { return data.rows(); }
  Eigen::Index chains() const { return data.cols(); }
};

using Rng = std::mt19937_64;

/// Deterministic seed for the substream (master, axis, trial). Distinct keys
/// give statistically independent mt19937_64 streams.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t axis, std::uint64_t trial);

/// Per-component rms of each chain's ideal output, sqrt(gamma |v_s^H a_s|^2 + 1) / sqrt(2).
RVector chain_component_rms(const ArrayGeometry& geom, const AnalogBeamformer& ab, double gamma,
                            double theta0);

/// One block of the full receive chain: Gaussian source, white chain noise,
/// analog combining, mixed-resolution quantization.
SnapshotBlock generate_snapshots(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                 const AdcProfile& profile, const SourceTruth& truth,
                                 std::uint64_t seed);

/// Unquantized, noise-free block V_A^H a(theta0) s(n) for the given symbols.
SnapshotBlock noiseless_snapshots(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                  double theta0, std::span<const Complex> symbols);

/// (1/N) sum_n y(n) y(n)^H.
CMatrix sample_covariance(const SnapshotBlock& block);

/// Empirical per-chain power mean_n |y_s(n)|^2.
RVector chain_powers(const SnapshotBlock& block);

} // namespace hdoa
