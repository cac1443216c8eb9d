#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hdoa/array_model.hpp"
#include "hdoa/quantizer.hpp"

namespace hdoa {

enum class SweepAxis { none, snr_db, bits, m_total, kappa, theta0 };

std::string_view axis_name(SweepAxis axis);

/// Throws ConfigError for unknown names.
SweepAxis parse_axis(std::string_view name);

struct Sweep {
  SweepAxis axis = SweepAxis::none;
  std::vector<double> values;
};

/// "axis=start:stop:step" (stop included when reached within 1e-9 steps) or
/// "axis=v1,v2,...". Values must be strictly monotone. Throws ConfigError.
Sweep parse_sweep(std::string_view text);

struct ExperimentConfig {
  int m_total = 128;
  int m_per = 4;
  double spacing = 0.5;
  double kappa = 0.25;
  int bits = 3;
  int bits_high = 12;
  double snr_db = 0.0;
  double theta0_deg = 15.0;
  int snapshots = 32;
  int trials = 2000;
  std::uint64_t seed = 1;
  Sweep sweep;
  std::string out;
  bool farthest_candidate = false;
  bool sign_recovery = true;

  /// Number of axis points, 1 without a sweep.
  std::size_t points() const;
  double axis_value(std::size_t index) const;
  /// Copy with the axis value of `index` applied and the sweep cleared.
  ExperimentConfig at(std::size_t index) const;

  double gamma() const;
  double theta0() const;
  ArrayGeometry geometry() const;
  AdcProfile profile() const;

  /// Checks every axis point. Throws ConfigError.
  void validate() const;
};

} // namespace hdoa
