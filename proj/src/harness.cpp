#include "hdoa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>

#include <omp.h>

#include "hdoa/beamformer.hpp"
#include "hdoa/estimator.hpp"
#include "hdoa/synth.hpp"

namespace hdoa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

struct McSetup {
  ExperimentConfig config;
  ArrayGeometry geom;
  AnalogBeamformer ab;
  AdcProfile profile;
  SourceTruth truth;
  EstimatorOptions options;
};

McSetup make_setup(const ExperimentConfig& p) {
  const ArrayGeometry geom = p.geometry();
  McSetup s{p, geom, design_coverage_ab(geom), p.profile(), {}, {}};
  s.truth = {p.theta0(), p.gamma(), p.snapshots};
  s.options.rule = p.farthest_candidate ? AmbiguityRule::literal_farthest : AmbiguityRule::nearest;
  s.options.sign_recovery = p.sign_recovery;
  return s;
}

std::vector<McSetup> make_setups(const ExperimentConfig& config) {
  config.validate();
  std::vector<McSetup> setups;
  for (std::size_t i = 0; i < config.points(); ++i) setups.push_back(make_setup(config.at(i)));
  return setups;
}

// Estimation error in degrees; NaN when the estimator reports a numerical failure.
double trial_error(const McSetup& s, std::uint64_t master, std::size_t point, int trial) {
  const std::uint64_t seed = substream_seed(master, point, static_cast<std::uint64_t>(trial));
  try {
    const SnapshotBlock block = generate_snapshots(s.geom, s.ab, s.profile, s.truth, seed);
    const DigitalCombiner combiner = DigitalCombiner::from_block(s.geom, s.ab, block);
    const DoaEstimate est = stb_root_music(block, s.geom, s.ab, combiner, s.options);
    return rad2deg(est.theta - s.truth.theta0);
  } catch (const NumericalError&) {
    return kNaN;
  }
}

McResult reduce_trials(const ExperimentConfig& config, const std::vector<McSetup>& setups,
                       const std::vector<double>& errors) {
  McResult result;
  result.axis = config.sweep.axis;
  const auto trials = static_cast<std::size_t>(config.trials);
  for (std::size_t i = 0; i < setups.size(); ++i) {
    McPoint p;
    p.config = setups[i].config;
    p.axis_value = config.axis_value(i);
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double e = errors[i * trials + t];
      if (std::isnan(e)) {
        ++p.failed;
      } else {
        ++p.completed;
        sum += e * e;
      }
    }
    p.rmse_deg = p.completed ? std::sqrt(sum / p.completed) : kNaN;
    const McSetup& s = setups[i];
    p.crlb_deg2 =
        crlb_theta_joint(fim_numerical_oracle(s.geom, s.ab, s.profile, s.truth.gamma, s.truth.theta0),
                   s.truth.snapshots)
            .deg2;
    result.points.push_back(p);
  }
  result.monotone_in_snr = rmse_nonincreasing_in_snr(result.points, config.sweep.axis);
  return result;
}

std::optional<ValidationPoint> validate_point(int m, int ma, double kappa, int bits, double gamma,
                                              double theta0_deg, double spacing) {
  if (m % ma != 0) return std::nullopt;
  const ArrayGeometry geom(m, ma, spacing);
  const double high = kappa * geom.m_sub();
  if (std::abs(high - std::round(high)) > 1e-9) return std::nullopt;
  const AdcProfile profile = AdcProfile::make(bits, geom.m_sub(), kappa);
  const double theta0 = deg2rad(theta0_deg);

  const FisherEntries c = fim_closed_form(geom, profile, gamma, theta0);
  const FisherEntries o = fim_numerical_oracle(geom, all_ones_ab(geom), profile, gamma, theta0);
  // At a null of the all-ones beam both entries vanish; the floor is set by
  // the fully digital array so roundoff there is not read as a discrepancy.
  const FisherEntries ideal = fim_closed_form(ArrayGeometry(m, 1, spacing),
                                              AdcProfile::make(bits, m, 1.0), gamma, theta0);
  constexpr double floor = 1e-12;
  ValidationPoint v{m, ma, kappa, bits, gamma, theta0_deg, 0.0, 0.0, 0.0};
  v.rel_gg = std::abs(c.gg - o.gg) / std::max(std::abs(o.gg), floor * ideal.gg);
  v.rel_tt = std::abs(c.tt - o.tt) / std::max(std::abs(o.tt), floor * ideal.tt);
  const double norm = std::sqrt(o.gg * o.gg + 2.0 * o.gt * o.gt + o.tt * o.tt);
  v.gt = std::abs(o.gt) / norm;
  return v;
}

struct GridPoint {
  int m;
  int ma;
  double kappa;
  int bits;
  double gamma;
  double theta0_deg;
};

std::vector<GridPoint> enumerate(const ValidationGrid& g) {
  std::vector<GridPoint> pts;
  for (int m : g.m_total)
    for (int ma : g.m_per)
      for (double k : g.kappa)
        for (int b : g.bits)
          for (double gm : g.gamma)
            for (double th : g.theta0_deg) pts.push_back({m, ma, k, b, gm, th});
  return pts;
}

ValidationReport reduce_validation(const std::vector<std::optional<ValidationPoint>>& results,
                                   double tolerance) {
  ValidationReport r;
  r.tolerance = tolerance;
  for (const auto& v : results) {
    if (!v) {
      ++r.skipped;
      continue;
    }
    ++r.evaluated;
    const double rel = std::max(v->rel_gg, v->rel_tt);
    if (rel > r.max_rel || r.evaluated == 1) {
      r.max_rel = rel;
      r.worst = *v;
    }
    r.max_gt = std::max(r.max_gt, v->gt);
    if (!(v->gt <= r.gt_tolerance)) ++r.gt_exceeding;
    if (!(rel <= tolerance)) r.failing.push_back(*v);
  }
  return r;
}

} // namespace

double rmse(std::span<const double> errors) {
  if (errors.empty()) throw ConfigError("rmse: no samples");
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

bool McPoint::over_failure_cap() const {
  const int total = completed + failed;
  return completed == 0 || failed > 0.01 * total;
}

bool McResult::ok() const {
  if (!monotone_in_snr) return false;
  return std::none_of(points.begin(), points.end(),
                      [](const McPoint& p) { return p.over_failure_cap(); });
}

McResult monte_carlo_rmse(const ExperimentConfig& config, int threads) {
  const std::vector<McSetup> setups = make_setups(config);
  const auto trials = static_cast<std::size_t>(config.trials);
  const auto total = static_cast<std::int64_t>(setups.size() * trials);
  std::vector<double> errors(static_cast<std::size_t>(total), kNaN);
  std::exception_ptr fault;

#pragma omp parallel for num_threads(resolve_threads(threads)) schedule(dynamic, 16)
  for (std::int64_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      errors[idx] = trial_error(setups[idx / trials], config.seed, idx / trials,
                                static_cast<int>(idx % trials));
    } catch (...) {
#pragma omp critical(hdoa_mc_fault)
      if (!fault) fault = std::current_exception();
    }
  }
  if (fault) std::rethrow_exception(fault);
  return reduce_trials(config, setups, errors);
}

McResult monte_carlo_rmse_serial(const ExperimentConfig& config) {
  const std::vector<McSetup> setups = make_setups(config);
  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<double> errors(setups.size() * trials);
  for (std::size_t i = 0; i < setups.size(); ++i)
    for (std::size_t t = 0; t < trials; ++t)
      errors[i * trials + t] = trial_error(setups[i], config.seed, i, static_cast<int>(t));
  return reduce_trials(config, setups, errors);
}

bool rmse_nonincreasing_in_snr(const std::vector<McPoint>& points, SweepAxis axis) {
  if (axis != SweepAxis::snr_db || points.size() < 2) return true;
  std::vector<const McPoint*> order;
  for (const auto& p : points) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const McPoint* a, const McPoint* b) { return a->config.snr_db < b->config.snr_db; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const McPoint& lo = *order[i - 1];
    const McPoint& hi = *order[i];
    const int n = std::min(lo.completed, hi.completed);
    if (n == 0) return false;
    if (hi.rmse_deg > lo.rmse_deg * (1.0 + 4.0 / std::sqrt(static_cast<double>(n)))) return false;
  }
  return true;
}

std::vector<ClosedFormRow> sweep_closed_form(const ExperimentConfig& config) {
  config.validate();
  std::vector<ClosedFormRow> rows;
  for (std::size_t i = 0; i < config.points(); ++i) {
    const ExperimentConfig p = config.at(i);
    const ArrayGeometry geom = p.geometry();
    const AdcProfile profile = p.profile();
    ClosedFormRow row{p, config.axis_value(i), {}, 0.0};
    row.report = closed_form_report(geom, profile, p.gamma(), p.theta0(), p.snapshots);
    row.eta_pl_ratio = performance_loss_ratio(geom, profile, p.gamma(), p.theta0());
    rows.push_back(row);
  }
  return rows;
}

std::vector<EnergyRow> sweep_energy(const ExperimentConfig& config, const PowerModel& model) {
  config.validate();
  model.validate();
  std::vector<EnergyRow> rows;
  for (std::size_t i = 0; i < config.points(); ++i) {
    const ExperimentConfig p = config.at(i);
    const ArrayGeometry geom = p.geometry();
    const AdcProfile profile = p.profile();
    EnergyRow row{p, config.axis_value(i), total_power(geom, profile, model), 0.0, 0.0};
    row.crlb_deg2 =
        crlb_theta(fim_closed_form(geom, profile, p.gamma(), p.theta0()), p.snapshots).deg2;
    row.eta_ee = energy_efficiency(row.crlb_deg2, row.power.p_total);
    rows.push_back(row);
  }
  return rows;
}

ValidationReport validate_oracle(const ValidationGrid& grid, int threads, double tolerance) {
  const std::vector<GridPoint> pts = enumerate(grid);
  std::vector<std::optional<ValidationPoint>> results(pts.size());
  std::exception_ptr fault;
  const auto total = static_cast<std::int64_t>(pts.size());

#pragma omp parallel for num_threads(resolve_threads(threads)) schedule(dynamic, 4)
  for (std::int64_t k = 0; k < total; ++k) {
    const GridPoint& g = pts[static_cast<std::size_t>(k)];
    try {
      results[static_cast<std::size_t>(k)] =
          validate_point(g.m, g.ma, g.kappa, g.bits, g.gamma, g.theta0_deg, grid.spacing);
    } catch (...) {
#pragma omp critical(hdoa_validate_fault)
      if (!fault) fault = std::current_exception();
    }
  }
  if (fault) std::rethrow_exception(fault);
  return reduce_validation(results, tolerance);
}

ValidationReport validate_oracle_serial(const ValidationGrid& grid, double tolerance) {
  std::vector<std::optional<ValidationPoint>> results;
  for (const GridPoint& g : enumerate(grid))
    results.push_back(
        validate_point(g.m, g.ma, g.kappa, g.bits, g.gamma, g.theta0_deg, grid.spacing));
  return reduce_validation(results, tolerance);
}

std::vector<std::string> config_columns() {
  return {"m",          "ma",        "spacing", "kappa", "bits",          "bits_high",
          "snr_db",     "theta0_deg", "snapshots", "trials", "seed", "ambiguity_rule",
          "sign_recovery"};
}

std::vector<std::string> config_cells(const ExperimentConfig& c) {
  return {std::to_string(c.m_total),
          std::to_string(c.m_per),
          format_number(c.spacing),
          format_number(c.kappa),
          std::to_string(c.bits),
          std::to_string(c.bits_high),
          format_number(c.snr_db),
          format_number(c.theta0_deg),
          std::to_string(c.snapshots),
          std::to_string(c.trials),
          std::to_string(c.seed),
          c.farthest_candidate ? "literal_farthest" : "nearest",
          c.sign_recovery ? "1" : "0"};
}

namespace {

CsvTable with_config(const std::vector<std::string>& result_columns) {
  CsvTable t;
  t.columns = {"point", "axis", "axis_value"};
  for (auto& c : config_columns()) t.columns.push_back(c);
  for (auto& c : result_columns) t.columns.push_back(c);
  return t;
}

std::vector<std::string> lead_cells(std::size_t index, SweepAxis axis, double axis_value,
                                    const ExperimentConfig& point) {
  std::vector<std::string> cells{std::to_string(index), std::string(axis_name(axis)),
                                 format_number(axis_value)};
  for (auto& c : config_cells(point)) cells.push_back(c);
  return cells;
}

} // namespace

CsvTable mc_table(const McResult& result) {
  CsvTable t = with_config({"rmse_deg", "crlb_deg2", "sqrt_crlb_deg", "rmse_over_sqrt_crlb",
                            "completed", "failed"});
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const McPoint& p = result.points[i];
    auto cells = lead_cells(i, result.axis, p.axis_value, p.config);
    const double root = std::sqrt(p.crlb_deg2);
    for (auto& c : {format_number(p.rmse_deg), format_number(p.crlb_deg2), format_number(root),
                    format_number(p.rmse_deg / root), std::to_string(p.completed),
                    std::to_string(p.failed)})
      cells.push_back(c);
    t.add_row(std::move(cells));
  }
  return t;
}

CsvTable closed_form_table(const std::vector<ClosedFormRow>& rows, SweepAxis axis) {
  CsvTable t = with_config({"f_gamma_gamma", "f_gamma_theta", "f_theta_theta", "crlb_rad2",
                            "crlb_deg2", "eta_pl"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ClosedFormRow& r = rows[i];
    auto cells = lead_cells(i, axis, r.axis_value, r.config);
    for (auto& c : {format_number(r.report.entries.gg), format_number(r.report.entries.gt),
                    format_number(r.report.entries.tt), format_number(r.report.crlb_rad2),
                    format_number(r.report.crlb_deg2), format_number(r.report.eta_pl)})
      cells.push_back(c);
    t.add_row(std::move(cells));
  }
  return t;
}

CsvTable ploss_table(const std::vector<ClosedFormRow>& rows, SweepAxis axis) {
  CsvTable t = with_config({"eta_pl", "eta_pl_ratio"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto cells = lead_cells(i, axis, rows[i].axis_value, rows[i].config);
    cells.push_back(format_number(rows[i].report.eta_pl));
    cells.push_back(format_number(rows[i].eta_pl_ratio));
    t.add_row(std::move(cells));
  }
  return t;
}

CsvTable energy_table(const std::vector<EnergyRow>& rows, SweepAxis axis) {
  CsvTable t = with_config({"p_phase_shifters_w", "p_rf_w", "p_high_w", "p_low_w", "p_total_w",
                            "crlb_deg2", "eta_ee"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EnergyRow& r = rows[i];
    auto cells = lead_cells(i, axis, r.axis_value, r.config);
    for (auto& c : {format_number(r.power.phase_shifters), format_number(r.power.rf_chains),
                    format_number(r.power.high_chains), format_number(r.power.low_chains),
                    format_number(r.power.p_total), format_number(r.crlb_deg2),
                    format_number(r.eta_ee)})
      cells.push_back(c);
    t.add_row(std::move(cells));
  }
  return t;
}

CsvTable validation_table(const ValidationReport& report) {
  CsvTable t;
  t.columns = {"m", "ma", "kappa", "bits", "gamma", "theta0_deg", "rel_gg", "rel_tt", "gt_norm",
               "status"};
  auto row = [&](const ValidationPoint& v, const char* status) {
    t.add_row({std::to_string(v.m_total), std::to_string(v.m_per), format_number(v.kappa),
               std::to_string(v.bits), format_number(v.gamma), format_number(v.theta0_deg),
               format_number(v.rel_gg), format_number(v.rel_tt), format_number(v.gt), status});
  };
  if (report.evaluated > 0) row(report.worst, report.ok() ? "worst" : "worst_fail");
  for (const auto& v : report.failing) row(v, "fail");
  return t;
}

} // namespace hdoa
