#include "hdoa/quantizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <string>

namespace hdoa {
namespace {

constexpr int kMaxBits = 16;

// Distortion of the optimal Gaussian scalar quantizer, b = 1..5.
constexpr std::array<double, 5> kBetaTable = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};

// Positive halves of the Lloyd-Max codebooks for N(0, 1).
constexpr std::array<double, 1> kLevels1 = {0.79788456080286536};
constexpr std::array<double, 2> kLevels2 = {0.45278003463649201, 1.5104176084990954};
constexpr std::array<double, 4> kLevels3 = {0.24509417894422167, 0.75600528120587727,
                                            1.3439092785049999, 2.1519457045369873};
constexpr std::array<double, 8> kLevels4 = {
    0.12839502985114701, 0.3880482994902902, 0.65675911853246338, 0.94234045648696137,
    1.2562311973471772,  1.6180463860218826, 2.0690172265313866,  2.7325895709951631};
constexpr std::array<double, 16> kLevels5 = {
    0.065889659770822556, 0.19805182966943217, 0.33137830576011165, 0.46669952297668096,
    0.60493362400943181,  0.74713570368781634, 0.89456511738837149, 1.0487833199231987,
    1.211804380609264,    1.3863403395866255,  1.5762280786121902,  1.7872332177032693,
    2.0287283993954973,   2.3177394041947349,  2.6911195773766686,  3.2607324934014006};

template <std::size_t N>
Codebook symmetric_lloyd_max(const std::array<double, N>& positive) {
  Codebook cb;
  cb.levels.reserve(2 * N);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) cb.levels.push_back(-*it);
  for (double v : positive) cb.levels.push_back(v);
  // Nearest-neighbour thresholds.
  for (std::size_t i = 0; i + 1 < cb.levels.size(); ++i)
    cb.thresholds.push_back(0.5 * (cb.levels[i] + cb.levels[i + 1]));
  cb.thresholds[N - 1] = 0.0;
  return cb;
}

Codebook uniform_midrise(int bits, double step) {
  const int count = 1 << bits;
  Codebook cb;
  cb.levels.resize(count);
  cb.thresholds.resize(count - 1);
  for (int i = 0; i < count; ++i) cb.levels[i] = (i - count / 2 + 0.5) * step;
  for (int i = 0; i + 1 < count; ++i) cb.thresholds[i] = (i - count / 2 + 1) * step;
  return cb;
}

Codebook optimal_uniform(int bits) {
  const int count = 1 << bits;
  auto mse = [bits](double step) { return gaussian_mse(uniform_midrise(bits, step)); };
  // MSE is unimodal in the step; golden-section search.
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 1e-6;
  double hi = 16.0 / count;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = mse(x1);
  double f2 = mse(x2);
  while (hi - lo > 1e-12 * hi) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = mse(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = mse(x2);
    }
  }
  return uniform_midrise(bits, 0.5 * (lo + hi));
}

Codebook build_codebook(int bits) {
  switch (bits) {
    case 1: return symmetric_lloyd_max(kLevels1);
    case 2: return symmetric_lloyd_max(kLevels2);
    case 3: return symmetric_lloyd_max(kLevels3);
    case 4: return symmetric_lloyd_max(kLevels4);
    case 5: return symmetric_lloyd_max(kLevels5);
    default: return optimal_uniform(bits);
  }
}

double normal_pdf(double x) {
  return std::isinf(x) ? 0.0 : std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Complex quantize_sample(const Codebook& cb, Complex x, double rms) {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw ConfigError("quantizer: non-finite sample");
  return {cb.quantize(x.real() / rms) * rms, cb.quantize(x.imag() / rms) * rms};
}

void require_rms(double rms) {
  if (!(rms > 0.0) || !std::isfinite(rms)) throw ConfigError("quantizer: rms must be positive");
}

} // namespace

double distortion_factor(int bits) {
  if (bits < 1) throw ConfigError("quantizer: bits must be >= 1");
  if (bits <= 5) return kBetaTable[bits - 1];
  return std::sqrt(3.0) * kPi / 2.0 * std::pow(2.0, -2.0 * bits);
}

AdcProfile AdcProfile::make(int bits_low, int m_sub, double kappa, int bits_high) {
  if (bits_low < 1 || bits_high < 1) throw ConfigError("adc: bits must be >= 1");
  if (m_sub < 1) throw ConfigError("adc: need at least one RF chain");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw ConfigError("adc: kappa must lie in [0, 1]");
  const double high = kappa * m_sub;
  const double rounded = std::round(high);
  if (std::abs(high - rounded) > 1e-9)
    throw ConfigError("adc: kappa * M_s = " + std::to_string(high) + " is not an integer");
  AdcProfile p;
  p.bits_low_ = bits_low;
  p.bits_high_ = bits_high;
  p.m_high_ = static_cast<int>(rounded);
  p.m_low_ = m_sub - p.m_high_;
  p.beta_ = distortion_factor(bits_low);
  return p;
}

AdcProfile AdcProfile::with_beta(double beta) const {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("adc: beta must lie in [0, 1)");
  AdcProfile p = *this;
  p.beta_ = beta;
  return p;
}

double Codebook::quantize(double x) const {
  const auto cell = std::upper_bound(thresholds.begin(), thresholds.end(), x) - thresholds.begin();
  return levels[static_cast<std::size_t>(cell)];
}

const Codebook& codebook(int bits) {
  if (bits < 1 || bits > kMaxBits)
    throw ConfigError("quantizer: bits must lie in 1.." + std::to_string(kMaxBits));
  static std::array<Codebook, kMaxBits + 1> table;
  static std::array<std::once_flag, kMaxBits + 1> once;
  std::call_once(once[bits], [bits] { table[bits] = build_codebook(bits); });
  return table[bits];
}

double gaussian_mse(const Codebook& cb) {
  double total = 0.0;
  const auto n = cb.levels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i == 0 ? -INFINITY : cb.thresholds[i - 1];
    const double b = i + 1 == n ? INFINITY : cb.thresholds[i];
    const double q = cb.levels[i];
    const double pa = normal_pdf(a);
    const double pb = normal_pdf(b);
    const double mass = normal_cdf(b) - normal_cdf(a);
    const double first = pa - pb;
    const double second = mass + (std::isinf(a) ? 0.0 : a * pa) - (std::isinf(b) ? 0.0 : b * pb);
    total += second - 2.0 * q * first + q * q * mass;
  }
  return total;
}

CVector lloyd_max_quantize(std::span<const Complex> samples, int bits, double rms) {
  require_rms(rms);
  const Codebook& cb = codebook(bits);
  CVector out(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = quantize_sample(cb, samples[i], rms);
  return out;
}

double quant_noise_variance(const AdcProfile& profile, double gamma, double zeta_abs_sq,
                            int m_per) {
  return profile.alpha() * profile.beta() * (gamma * zeta_abs_sq / m_per + 1.0);
}

CVector mixed_adc_apply(std::span<const Complex> ideal, const AdcProfile& profile,
                        std::span<const double> per_chain_rms) {
  const auto chains = static_cast<std::size_t>(profile.m_sub());
  if (ideal.size() != chains || per_chain_rms.size() != chains)
    throw ConfigError("mixed adc: expected " + std::to_string(chains) + " chains");
  CVector out(static_cast<Eigen::Index>(chains));
  const auto high = static_cast<std::size_t>(profile.m_high());
  for (std::size_t c = 0; c < high; ++c) out[static_cast<Eigen::Index>(c)] = ideal[c];
  if (high == chains) return out;
  const Codebook& cb = codebook(profile.bits_low());
  for (std::size_t c = high; c < chains; ++c) {
    require_rms(per_chain_rms[c]);
    out[static_cast<Eigen::Index>(c)] = quantize_sample(cb, ideal[c], per_chain_rms[c]);
  }
  return out;
}

} // namespace hdoa
