#include "hdoa/experiment.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace hdoa {
namespace {

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value))
    throw ConfigError("sweep: '" + std::string(text) + "' is not a number");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

bool is_integer_axis(SweepAxis axis) {
  return axis == SweepAxis::bits || axis == SweepAxis::m_total;
}

int to_int(double v, std::string_view what) {
  if (std::abs(v - std::round(v)) > 1e-9)
    throw ConfigError(std::string(what) + " must be an integer");
  return static_cast<int>(std::lround(v));
}

} // namespace

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
  case SweepAxis::none: return "none";
  case SweepAxis::snr_db: return "snr_db";
  case SweepAxis::bits: return "bits";
  case SweepAxis::m_total: return "m_total";
  case SweepAxis::kappa: return "kappa";
  case SweepAxis::theta0: return "theta0";
  }
  return "none";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::snr_db, SweepAxis::bits, SweepAxis::m_total, SweepAxis::kappa,
                      SweepAxis::theta0})
    if (axis_name(a) == name) return a;
  throw ConfigError("sweep: unknown axis '" + std::string(name) +
                    "' (snr_db, bits, m_total, kappa, theta0)");
}

Sweep parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("sweep: expected axis=values");
  Sweep sweep;
  sweep.axis = parse_axis(text.substr(0, eq));
  const std::string_view body = text.substr(eq + 1);

  if (body.find(':') != std::string_view::npos) {
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw ConfigError("sweep: expected start:stop:step");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (step == 0.0 || (stop - start) * step < 0.0)
      throw ConfigError("sweep: step must be nonzero and point from start to stop");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("sweep: too many points");
    for (long i = 0; i < count; ++i) sweep.values.push_back(start + static_cast<double>(i) * step);
  } else {
    for (std::string_view part : split(body, ',')) sweep.values.push_back(parse_number(part));
  }

  if (sweep.values.empty()) throw ConfigError("sweep: no values");
  if (sweep.values.size() > 1) {
    const bool up = sweep.values[1] > sweep.values[0];
    for (std::size_t i = 1; i < sweep.values.size(); ++i)
      if ((sweep.values[i] > sweep.values[i - 1]) != up || sweep.values[i] == sweep.values[i - 1])
        throw ConfigError("sweep: values must be strictly monotone");
  }
  return sweep;
}

std::size_t ExperimentConfig::points() const {
  return sweep.axis == SweepAxis::none ? 1 : sweep.values.size();
}

double ExperimentConfig::axis_value(std::size_t index) const {
  const ExperimentConfig p = at(index);
  switch (sweep.axis) {
  case SweepAxis::none: return 0.0;
  case SweepAxis::snr_db: return p.snr_db;
  case SweepAxis::bits: return p.bits;
  case SweepAxis::m_total: return p.m_total;
  case SweepAxis::kappa: return p.kappa;
  case SweepAxis::theta0: return p.theta0_deg;
  }
  return 0.0;
}

ExperimentConfig ExperimentConfig::at(std::size_t index) const {
  ExperimentConfig p = *this;
  p.sweep = {};
  if (sweep.axis == SweepAxis::none) return p;
  if (index >= sweep.values.size()) throw ConfigError("experiment: axis index out of range");
  const double v = sweep.values[index];
  switch (sweep.axis) {
  case SweepAxis::none: break;
  case SweepAxis::snr_db: p.snr_db = v; break;
  case SweepAxis::bits: p.bits = to_int(v, "bits"); break;
  case SweepAxis::m_total: p.m_total = to_int(v, "m_total"); break;
  case SweepAxis::kappa: p.kappa = v; break;
  case SweepAxis::theta0: p.theta0_deg = v; break;
  }
  return p;
}

double ExperimentConfig::gamma() const { return std::pow(10.0, snr_db / 10.0); }

double ExperimentConfig::theta0() const { return deg2rad(theta0_deg); }

ArrayGeometry ExperimentConfig::geometry() const { return {m_total, m_per, spacing}; }

AdcProfile ExperimentConfig::profile() const {
  return AdcProfile::make(bits, geometry().m_sub(), kappa, bits_high);
}

void ExperimentConfig::validate() const {
  if (snapshots < 1) throw ConfigError("snapshots must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (sweep.axis != SweepAxis::none && sweep.values.empty())
    throw ConfigError("sweep: no values");
  if (is_integer_axis(sweep.axis))
    for (double v : sweep.values) to_int(v, axis_name(sweep.axis));
  for (std::size_t i = 0; i < points(); ++i) {
    const ExperimentConfig p = at(i);
    if (p.bits < 1 || p.bits > 16) throw ConfigError("bits must lie in 1..16");
    if (p.bits_high < 1 || p.bits_high > 16) throw ConfigError("bits-high must lie in 1..16");
    if (!std::isfinite(p.snr_db)) throw ConfigError("snr-db must be finite");
    require_valid_direction(p.theta0());
    (void)p.profile();
  }
}

} // namespace hdoa
