#include "hdoa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace hdoa {
namespace {

void require_coverage(const AnalogBeamformer& ab) {
  if (ab.mode != AbMode::coverage || ab.beam_angles.size() != static_cast<std::size_t>(ab.m_sub()))
    throw ConfigError("stb_root_music: requires the coverage analog beamformer");
}

int strongest_chain(const RVector& powers) {
  Eigen::Index best = 0;
  powers.maxCoeff(&best);
  return static_cast<int>(best);
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

CVector digital_phases(const ArrayGeometry& geom, const AnalogBeamformer& ab) {
  CVector phases(ab.m_sub());
  for (int s = 0; s < ab.m_sub(); ++s)
    phases[s] = std::polar(1.0, kPi * (geom.m_per() - 1) * geom.spacing() *
                                    std::sin(ab.beam_angles[s]) / ArrayGeometry::wavelength());
  return phases;
}

} // namespace

CVector root_music_polynomial(const CMatrix& cov, int sources) {
  const auto ms = cov.rows();
  if (cov.cols() != ms) throw ConfigError("root_music: covariance must be square");
  if (ms < 2) throw ConfigError("root_music: need at least two virtual elements");
  if (sources < 1 || sources >= ms) throw ConfigError("root_music: invalid source count");

  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericalError("root_music: eigendecomposition failed");
  const RVector& values = eig.eigenvalues();  // ascending
  const double top = values[ms - 1];
  const double spread = top - values[ms - 1 - sources];
  if (!(top > 0.0) || spread <= 1e-12 * top)
    throw NumericalError("root_music: covariance has no dominant eigenvalue (no source)");

  const auto noise_dim = ms - sources;
  const CMatrix un = eig.eigenvectors().leftCols(noise_dim);
  const CMatrix projector = un * un.adjoint();

  CVector coeffs(2 * ms - 1);
  for (Eigen::Index k = ms - 1; k >= -(ms - 1); --k) {
    Complex sum{0.0, 0.0};
    for (Eigen::Index i = std::max<Eigen::Index>(0, -k); i < ms && i + k < ms; ++i)
      sum += projector(i, i + k);
    coeffs[ms - 1 - k] = sum;
  }
  return coeffs;
}

std::vector<Complex> polynomial_roots(const CVector& coeffs) {
  const double scale = coeffs.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw NumericalError("polynomial_roots: zero polynomial");
  Eigen::Index lead = 0;
  while (lead < coeffs.size() && std::abs(coeffs[lead]) <= 1e-14 * scale) ++lead;
  const Eigen::Index degree = coeffs.size() - 1 - lead;
  if (degree < 1) return {};

  CMatrix companion = CMatrix::Zero(degree, degree);
  for (Eigen::Index j = 0; j < degree; ++j)
    companion(0, j) = -coeffs[lead + 1 + j] / coeffs[lead];
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

  const Eigen::ComplexEigenSolver<CMatrix> eig(companion, false);
  if (eig.info() != Eigen::Success) throw NumericalError("polynomial_roots: QR iteration failed");
  const CVector& values = eig.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

Complex root_music(const CMatrix& cov, int sources) {
  const std::vector<Complex> roots = polynomial_roots(root_music_polynomial(cov, sources));

  constexpr double on_circle = 1e-6;
  std::size_t chosen = roots.size();
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double mod = std::abs(roots[i]);
    if (mod > 1.0 + on_circle || mod == 0.0) continue;
    const double gap = std::abs(1.0 - mod);
    if (gap < closest) {
      closest = gap;
      chosen = i;
    }
  }
  if (chosen == roots.size()) throw NumericalError("root_music: no root inside the unit circle");

  // Roots come in pairs (z, 1/conj(z)) with a common phase. Averaging the pair
  // keeps that phase and stays accurate when the pair collapses to a double
  // root on the circle, where each root alone is only sqrt(eps) accurate.
  const Complex z = roots[chosen];
  const Complex mirror = 1.0 / std::conj(z);
  std::size_t partner = roots.size();
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i == chosen) continue;
    const double dist = std::abs(roots[i] - mirror);
    if (dist < nearest) {
      nearest = dist;
      partner = i;
    }
  }
  double phase = std::arg(z);
  if (partner != roots.size() && nearest < 1e-4 * std::max(1.0, std::abs(mirror)))
    phase = std::arg(z + roots[partner]);
  return std::polar(std::min(std::abs(z), 1.0), phase);
}

std::vector<double> candidate_angles(Complex root, const ArrayGeometry& geom) {
  if (root == Complex{0.0, 0.0}) throw ConfigError("candidate_angles: zero root");
  const double aperture = geom.m_per() * geom.spacing() / ArrayGeometry::wavelength();
  const double u0 = std::arg(root) / (2.0 * kPi * aperture);
  const double step = 1.0 / aperture;
  constexpr double slack = 1e-12;

  const auto kmin = static_cast<long>(std::ceil((-1.0 - slack - u0) / step));
  const auto kmax = static_cast<long>(std::floor((1.0 + slack - u0) / step));
  std::vector<double> sines;
  for (long k = kmin; k <= kmax; ++k) sines.push_back(u0 + static_cast<double>(k) * step);
  if (sines.empty()) sines.push_back(u0);

  const double edge = std::nextafter(kPi / 2, 0.0);
  std::vector<double> angles;
  for (double u : sines) {
    const double theta = std::asin(std::clamp(u, -1.0, 1.0));
    angles.push_back(std::clamp(theta, -edge, edge));
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  return angles;
}

double resolve_ambiguity(const CandidateSet& candidates, const ArrayGeometry& geom,
                         AmbiguityRule rule) {
  if (candidates.angles.empty()) throw ConfigError("resolve_ambiguity: no candidates");
  const double best = candidates.best_beam;
  const double period = ArrayGeometry::wavelength() / geom.spacing();

  double chosen = candidates.angles.front();
  double chosen_score = std::numeric_limits<double>::quiet_NaN();
  for (double angle : candidates.angles) {
    double score = 0.0;
    if (rule == AmbiguityRule::nearest)
      score = std::abs(std::remainder(std::sin(angle) - std::sin(best), period));
    else
      score = -std::abs(angle - best);

    if (std::isnan(chosen_score) || score < chosen_score - 1e-12 ||
        (std::abs(score - chosen_score) <= 1e-12 && std::abs(angle) < std::abs(chosen))) {
      chosen = angle;
      chosen_score = score;
    }
  }
  return chosen;
}

std::vector<int> recover_chain_signs(const CMatrix& normalized_cov, const ArrayGeometry& geom,
                                     const std::vector<double>& beam_angles, int best_chain) {
  const auto ms = normalized_cov.rows();
  std::vector<int> signs(static_cast<std::size_t>(ms), 1);
  if (ms < 2) return signs;
  if (beam_angles.size() != static_cast<std::size_t>(ms))
    throw ConfigError("recover_chain_signs: one beam angle per chain required");

  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(normalized_cov);
  const CVector principal = eig.eigenvectors().col(ms - 1);

  // Adjacent products equal +-z, so their squares share the phase of z^2.
  CVector adjacent(ms - 1);
  Complex z2{0.0, 0.0};
  for (Eigen::Index m = 0; m + 1 < ms; ++m) {
    adjacent[m] = principal[m + 1] * std::conj(principal[m]);
    z2 += adjacent[m] * adjacent[m];
  }
  if (std::abs(z2) == 0.0) return signs;
  const Complex z = std::sqrt(z2 / std::abs(z2));

  const double best_sine = std::sin(beam_angles[static_cast<std::size_t>(best_chain)]);
  std::vector<double> predicted(static_cast<std::size_t>(ms));
  for (Eigen::Index m = 0; m < ms; ++m)
    predicted[m] = dirichlet_ratio(geom.m_per(), geom.spacing(),
                                   best_sine - std::sin(beam_angles[static_cast<std::size_t>(m)]));

  double best_score = -std::numeric_limits<double>::infinity();
  for (const Complex branch : {z, -z}) {
    std::vector<int> trial(static_cast<std::size_t>(ms), 1);
    for (Eigen::Index m = best_chain; m + 1 < ms; ++m)
      trial[m + 1] = trial[m] * sign_of(std::real(adjacent[m] * std::conj(branch)));
    for (Eigen::Index m = best_chain - 1; m >= 0; --m)
      trial[m] = trial[m + 1] * sign_of(std::real(adjacent[m] * std::conj(branch)));
    double score = 0.0;
    for (Eigen::Index m = 0; m < ms; ++m) score += trial[m] * predicted[m];
    if (score > best_score) {
      best_score = score;
      signs = trial;
    }
  }
  return signs;
}

DoaEstimate estimate_from_normalized(const CMatrix& normalized_cov, const RVector& powers,
                                     const ArrayGeometry& geom, const AnalogBeamformer& ab,
                                     const EstimatorOptions& options) {
  require_coverage(ab);
  const auto ms = normalized_cov.rows();
  if (powers.size() != ms || ab.m_sub() != ms)
    throw ConfigError("estimator: covariance, powers and beamformer sizes differ");

  DoaEstimate est;
  const int best = strongest_chain(powers);
  est.chain_signs = options.sign_recovery
                        ? recover_chain_signs(normalized_cov, geom, ab.beam_angles, best)
                        : std::vector<int>(static_cast<std::size_t>(ms), 1);

  CMatrix corrected = normalized_cov;
  for (Eigen::Index i = 0; i < ms; ++i)
    for (Eigen::Index j = 0; j < ms; ++j)
      corrected(i, j) *= static_cast<double>(est.chain_signs[i] * est.chain_signs[j]);

  est.root = root_music(corrected);
  est.candidates.angles = candidate_angles(est.root, geom);
  est.candidates.chain_powers.assign(powers.data(), powers.data() + ms);
  est.candidates.best_beam = ab.beam_angles[static_cast<std::size_t>(best)];
  est.theta = resolve_ambiguity(est.candidates, geom, options.rule);
  return est;
}

DoaEstimate stb_root_music(const SnapshotBlock& block, const ArrayGeometry& geom,
                           const AnalogBeamformer& ab, const DigitalCombiner& combiner,
                           const EstimatorOptions& options) {
  require_coverage(ab);
  const SnapshotBlock normalized = energy_normalize(block, combiner);
  const RVector powers = combiner.energy_diag.cwiseAbs2();
  return estimate_from_normalized(sample_covariance(normalized), powers, geom, ab, options);
}

DoaEstimate stb_root_music_covariance(const CMatrix& chain_cov, const ArrayGeometry& geom,
                                      const AnalogBeamformer& ab, const EstimatorOptions& options) {
  require_coverage(ab);
  const auto ms = chain_cov.rows();
  if (chain_cov.cols() != ms || ab.m_sub() != ms)
    throw ConfigError("estimator: covariance does not match the beamformer");
  const RVector powers = chain_cov.diagonal().real();
  for (Eigen::Index s = 0; s < ms; ++s)
    if (!(powers[s] > 0.0))
      throw NumericalError("estimator: chain " + std::to_string(s) + " has zero power");

  const CVector phases = digital_phases(geom, ab);
  CMatrix normalized(ms, ms);
  for (Eigen::Index i = 0; i < ms; ++i)
    for (Eigen::Index j = 0; j < ms; ++j)
      normalized(i, j) =
          phases[i] * std::conj(phases[j]) * chain_cov(i, j) / std::sqrt(powers[i] * powers[j]);
  return estimate_from_normalized(normalized, powers, geom, ab, options);
}

} // namespace hdoa
