#pragma once

#include "hdoa/types.hpp"

namespace hdoa {

/// Uniform linear array split into equal, contiguous subarrays.
///
/// Positions are measured from the first (endpoint) element in units of the
/// carrier wavelength, which is fixed to 1.
class ArrayGeometry {
public:
  /// Throws ConfigError unless m_total is a positive multiple of m_per and
  /// spacing is positive and finite.
  ArrayGeometry(int m_total, int m_per, double spacing = 0.5);

  int m_total() const { return m_total_; }
  int m_sub() const { return m_total_ / m_per_; }
  int m_per() const { return m_per_; }
  double spacing() const { return spacing_; }
  static constexpr double wavelength() { return 1.0; }

  /// d_m = (m - 1) d for the zero-based index m - 1.
  double position(int index) const { return index * spacing_; }

  bool operator==(const ArrayGeometry&) const = default;

private:
  int m_total_;
  int m_per_;
  double spacing_;
};

struct PositionMatrices {
  RVector full;     // diagonal of D, length M
  RVector sub;      // diagonal of D_s, length M_s
  RVector element;  // diagonal of D_a, length M_a
};

struct SubarrayFactors {
  CVector sub;      // a_s, length M_s
  CVector element;  // a_a, length M_a
};

/// Throws ConfigError unless theta is finite and inside (-pi/2, pi/2).
void require_valid_direction(double theta);

CVector steering_vector(const ArrayGeometry& geom, double theta);

/// d a / d theta = j 2 pi / lambda cos(theta) D a(theta).
CVector steering_derivative(const ArrayGeometry& geom, double theta);

PositionMatrices position_matrices(const ArrayGeometry& geom);

/// a_s and a_a with a_s (x) a_a == steering_vector(geom, theta).
SubarrayFactors subarray_factors(const ArrayGeometry& geom, double theta);

/// Kronecker product of two column vectors.
CVector kron(const CVector& a, const CVector& b);

} // namespace hdoa
