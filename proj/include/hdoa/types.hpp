#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hdoa {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kJ{0.0, 1.0};

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// (180/pi)^2, converts a variance in rad^2 to deg^2.
inline constexpr double kRad2ToDeg2 = (180.0 / kPi) * (180.0 / kPi);

/// Thrown when a configuration or argument violates a documented precondition.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical stage cannot produce a meaningful answer
/// (no identifiable source, unbounded variance, zero-power chain).
class NumericalError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace hdoa
