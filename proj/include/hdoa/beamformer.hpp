#pragma once

#include <vector>

#include "hdoa/array_model.hpp"
#include "hdoa/types.hpp"

namespace hdoa {

struct SnapshotBlock;

enum class AbMode { all_ones, coverage };

/// Sub-connected analog combiner V_A. Column s is nonzero only on the rows of
/// subarray s; those M_a entries are stored row-wise in `weights`.
struct AnalogBeamformer {
  AbMode mode = AbMode::all_ones;
  CMatrix weights;                  // M_s x M_a, row s = v_{A,s} restricted to its block
  std::vector<double> beam_angles;  // radians, empty for all_ones

  int m_sub() const { return static_cast<int>(weights.rows()); }
  int m_per() const { return static_cast<int>(weights.cols()); }

  /// Dense block-diagonal M x M_s matrix.
  CMatrix matrix() const;
};

/// Diagonal digital stage: phase compensation V_D and energy matrix P_{M_s}
/// (entries sqrt(P_s)).
struct DigitalCombiner {
  CVector phase_diag;
  RVector energy_diag;

  /// Builds V_D from the beam angles of `ab` (unit phases for all-ones) and
  /// P_{M_s} from the per-chain empirical power of `block`.
  static DigitalCombiner from_block(const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                    const SnapshotBlock& block);
};

/// 3 dB subarray beamwidth in degrees, 50.8 lambda / (M_a d).
double beamwidth_3db(const ArrayGeometry& geom);

/// Smallest M_s whose beams cover [-90, 90] degrees, ceil(180 / beamwidth).
int min_subarrays_for_coverage(const ArrayGeometry& geom);

/// Beam s (zero-based) steers to (s + 1) pi / M_s - pi / 2 - pi / (2 M_s).
/// Throws ConfigError when M_s < min_subarrays_for_coverage(geom).
AnalogBeamformer design_coverage_ab(const ArrayGeometry& geom);

AnalogBeamformer all_ones_ab(const ArrayGeometry& geom);

/// V_A^H x. Throws ConfigError on length mismatch.
CVector apply_analog(const AnalogBeamformer& ab, const CVector& antenna_signal);

/// |v_{A,s}^H a_s(theta)|^2 per chain, i.e. the beam power gain toward theta.
RVector chain_gains(const ArrayGeometry& geom, const AnalogBeamformer& ab, double theta);

/// Real Dirichlet ratio sin(M_a x) / sin(x), x = pi d (u0 - u_s) / lambda,
/// with the removable singularities filled in by continuity.
double dirichlet_ratio(int m_per, double spacing, double sin_diff);

/// Complex subarray gain delta between source theta0 and beam theta_ms.
Complex subarray_gain(const ArrayGeometry& geom, double theta0, double theta_ms);

/// P^{-1} V_D y for every snapshot. Throws NumericalError on a zero-power chain.
SnapshotBlock energy_normalize(const SnapshotBlock& chains, const DigitalCombiner& combiner);

} // namespace hdoa
