#pragma once

#include <vector>

#include "hdoa/array_model.hpp"
#include "hdoa/beamformer.hpp"
#include "hdoa/synth.hpp"
#include "hdoa/types.hpp"

namespace hdoa {

struct CandidateSet {
  std::vector<double> angles;        // radians, each in (-pi/2, pi/2)
  std::vector<double> chain_powers;  // P_s per chain
  double best_beam = 0.0;            // beam angle of the strongest chain
};

enum class AmbiguityRule {
  nearest,          // candidate closest to the strongest beam
  literal_farthest  // arg max |candidate - best beam|, as the selection rule is printed
};

struct EstimatorOptions {
  AmbiguityRule rule = AmbiguityRule::nearest;
  /// Undo the sign of each chain's Dirichlet gain before root-MUSIC.
  bool sign_recovery = true;
};

struct DoaEstimate {
  double theta = 0.0;  // radians
  Complex root;
  CandidateSet candidates;
  std::vector<int> chain_signs;  // +-1 per chain as applied before root-MUSIC
};

/// Coefficients c_k, k = -(M_s-1)..(M_s-1), of the root-MUSIC polynomial:
/// c_k is the sum of the k-th diagonal of the noise-subspace projector. The
/// returned vector is ordered from k = M_s-1 (highest power) down.
CVector root_music_polynomial(const CMatrix& cov, int sources = 1);

/// All roots of sum_i coeffs[i] z^(n-i), n = coeffs.size() - 1, as the
/// eigenvalues of the companion matrix. Leading zero coefficients are dropped.
std::vector<Complex> polynomial_roots(const CVector& coeffs);

/// Root of the root-MUSIC polynomial inside (or on) the unit circle with the
/// largest modulus. Its phase is refined with its conjugate-reciprocal mirror.
/// Throws NumericalError when cov has no dominant eigenvalue and ConfigError
/// for M_s < 2 or a non-square input.
Complex root_music(const CMatrix& cov, int sources = 1);

/// All u = u0 + k lambda / (M_a d) in [-1, 1], u0 = lambda arg(root) / (2 pi M_a d),
/// mapped through arcsin and sorted ascending.
std::vector<double> candidate_angles(Complex root, const ArrayGeometry& geom);

/// Picks one candidate relative to the strongest beam. The nearest rule measures
/// distance between sines modulo lambda / d, the period of the subarray beam
/// pattern; ties go to the smaller |angle|.
double resolve_ambiguity(const CandidateSet& candidates, const ArrayGeometry& geom,
                         AmbiguityRule rule = AmbiguityRule::nearest);

/// Sign of each chain's real Dirichlet gain in a normalized covariance,
/// recovered from the principal eigenvector. The branch is chosen to agree with
/// the gain pattern predicted from the strongest beam.
std::vector<int> recover_chain_signs(const CMatrix& normalized_cov, const ArrayGeometry& geom,
                                     const std::vector<double>& beam_angles, int best_chain);

/// Root-MUSIC and ambiguity resolution on an energy-normalized covariance.
DoaEstimate estimate_from_normalized(const CMatrix& normalized_cov, const RVector& powers,
                                     const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                     const EstimatorOptions& options = {});

/// Single-time-block pipeline: energy_normalize -> sample_covariance ->
/// root_music -> candidate_angles -> resolve_ambiguity.
DoaEstimate stb_root_music(const SnapshotBlock& block, const ArrayGeometry& geom,
                           const AnalogBeamformer& ab, const DigitalCombiner& combiner,
                           const EstimatorOptions& options = {});

/// Same pipeline driven by a chain-level covariance (e.g. the population
/// covariance); normalization uses its diagonal as the chain powers.
DoaEstimate stb_root_music_covariance(const CMatrix& chain_cov, const ArrayGeometry& geom,
                                      const AnalogBeamformer& ab,
                                      const EstimatorOptions& options = {});

} // namespace hdoa
