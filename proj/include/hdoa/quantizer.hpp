#pragma once

#include <span>
#include <vector>

#include "hdoa/types.hpp"

namespace hdoa {

/// Distortion factor beta of the optimal b-bit scalar quantizer for Gaussian
/// input: tabulated for b <= 5, high-resolution approximation beyond.
/// Throws ConfigError for bits < 1.
double distortion_factor(int bits);

/// Resolution split of the RF chains. Chains [0, m_high) carry
/// high-resolution ADCs, chains [m_high, m_high + m_low) low-resolution ones.
class AdcProfile {
public:
  /// kappa * m_sub must be an integer (within 1e-9); throws ConfigError
  /// otherwise, or if bits are out of range.
  static AdcProfile make(int bits_low, int m_sub, double kappa, int bits_high = 12);

  /// Same partition with the distortion factor replaced; beta in [0, 1).
  AdcProfile with_beta(double beta) const;

  int bits_low() const { return bits_low_; }
  int bits_high() const { return bits_high_; }
  int m_high() const { return m_high_; }
  int m_low() const { return m_low_; }
  int m_sub() const { return m_high_ + m_low_; }
  double kappa() const { return static_cast<double>(m_high_) / m_sub(); }
  double beta() const { return beta_; }
  double alpha() const { return 1.0 - beta_; }

private:
  AdcProfile() = default;

  int bits_low_ = 1;
  int bits_high_ = 12;
  int m_high_ = 0;
  int m_low_ = 0;
  double beta_ = 0.0;
};

/// Symmetric scalar quantizer for unit-variance input: thresholds partition
/// the real line into levels.size() cells, cell i reconstructs to levels[i].
struct Codebook {
  std::vector<double> thresholds;  // ascending, size levels.size() - 1
  std::vector<double> levels;      // ascending

  double quantize(double x) const;
};

/// Lloyd-Max Gaussian codebook for bits 1..5; uniform mid-rise codebook with
/// MSE-optimal step for bits 6..16. Throws ConfigError outside 1..16.
const Codebook& codebook(int bits);

/// Closed-form mean-squared error of a codebook on N(0, 1) input.
double gaussian_mse(const Codebook& cb);

/// Quantizes I and Q independently after scaling by 1/rms and rescales by rms.
/// Throws ConfigError for non-finite samples or non-positive rms.
CVector lloyd_max_quantize(std::span<const Complex> samples, int bits, double rms);

/// AQNM quantization-noise variance alpha * beta * (gamma |zeta|^2 / M_a + 1).
double quant_noise_variance(const AdcProfile& profile, double gamma,
                            double zeta_abs_sq, int m_per);

/// High-resolution chains pass through, low-resolution chains are quantized
/// with their own per-component rms. Throws ConfigError on size mismatch.
CVector mixed_adc_apply(std::span<const Complex> ideal, const AdcProfile& profile,
                        std::span<const double> per_chain_rms);

} // namespace hdoa
