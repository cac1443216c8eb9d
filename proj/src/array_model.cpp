#include "hdoa/array_model.hpp"

#include <cmath>
#include <string>

namespace hdoa {

ArrayGeometry::ArrayGeometry(int m_total, int m_per, double spacing)
    : m_total_(m_total), m_per_(m_per), spacing_(spacing) {
  if (m_total <= 0 || m_per <= 0)
    throw ConfigError("array: element counts must be positive");
  if (m_total % m_per != 0)
    throw ConfigError("array: M = " + std::to_string(m_total) +
                      " is not a multiple of M_a = " + std::to_string(m_per));
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ConfigError("array: spacing must be positive and finite");
}

void require_valid_direction(double theta) {
  if (!std::isfinite(theta) || !(std::abs(theta) < kPi / 2))
    throw ConfigError("direction must lie in (-90, 90) degrees");
}

CVector steering_vector(const ArrayGeometry& geom, double theta) {
  require_valid_direction(theta);
  const double k = 2.0 * kPi * std::sin(theta) / ArrayGeometry::wavelength();
  CVector a(geom.m_total());
  for (int m = 0; m < geom.m_total(); ++m)
    a[m] = std::polar(1.0, k * geom.position(m));
  return a;
}

CVector steering_derivative(const ArrayGeometry& geom, double theta) {
  const CVector a = steering_vector(geom, theta);
  const double k = 2.0 * kPi * std::cos(theta) / ArrayGeometry::wavelength();
  CVector da(a.size());
  for (int m = 0; m < a.size(); ++m)
    da[m] = kJ * (k * geom.position(m)) * a[m];
  return da;
}

PositionMatrices position_matrices(const ArrayGeometry& geom) {
  PositionMatrices p;
  p.full.resize(geom.m_total());
  p.sub.resize(geom.m_sub());
  p.element.resize(geom.m_per());
  for (int m = 0; m < geom.m_total(); ++m) p.full[m] = geom.position(m);
  for (int s = 0; s < geom.m_sub(); ++s) p.sub[s] = geom.position(s * geom.m_per());
  for (int e = 0; e < geom.m_per(); ++e) p.element[e] = geom.position(e);
  return p;
}

SubarrayFactors subarray_factors(const ArrayGeometry& geom, double theta) {
  require_valid_direction(theta);
  const double k = 2.0 * kPi * std::sin(theta) / ArrayGeometry::wavelength();
  SubarrayFactors f;
  f.sub.resize(geom.m_sub());
  f.element.resize(geom.m_per());
  for (int s = 0; s < geom.m_sub(); ++s)
    f.sub[s] = std::polar(1.0, k * geom.position(s * geom.m_per()));
  for (int e = 0; e < geom.m_per(); ++e)
    f.element[e] = std::polar(1.0, k * geom.position(e));
  return f;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

} // namespace hdoa
