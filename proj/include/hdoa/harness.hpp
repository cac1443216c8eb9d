#pragma once

#include <span>
#include <vector>

#include "hdoa/crlb.hpp"
#include "hdoa/csv.hpp"
#include "hdoa/energy.hpp"
#include "hdoa/experiment.hpp"

namespace hdoa {

/// sqrt(mean(e^2)). Throws ConfigError on an empty span.
double rmse(std::span<const double> errors);

struct McPoint {
  ExperimentConfig config;  // resolved axis point
  double axis_value = 0.0;
  double rmse_deg = 0.0;    // over completed trials
  double crlb_deg2 = 0.0;   // joint bound from the oracle FIM, coverage beamformer
  int completed = 0;
  int failed = 0;

  /// More than 1% of trials raised an estimator error.
  bool over_failure_cap() const;
};

struct McResult {
  SweepAxis axis = SweepAxis::none;
  std::vector<McPoint> points;
  bool monotone_in_snr = true;

  bool ok() const;
};

/// Trial t of axis point i draws from substream (seed, i, t); results do not
/// depend on `threads` (<= 0 selects the OpenMP default).
McResult monte_carlo_rmse(const ExperimentConfig& config, int threads = 0);

/// Single-threaded reference of monte_carlo_rmse.
McResult monte_carlo_rmse_serial(const ExperimentConfig& config);

/// False when an SNR sweep's RMSE rises between adjacent points by more than
/// 4 / sqrt(N_t) relative, i.e. beyond sampling noise. True for other axes.
bool rmse_nonincreasing_in_snr(const std::vector<McPoint>& points, SweepAxis axis);

struct ClosedFormRow {
  ExperimentConfig config;
  double axis_value = 0.0;
  FisherReport report;
  double eta_pl_ratio = 0.0;  // same quantity through two CRLB evaluations
};

std::vector<ClosedFormRow> sweep_closed_form(const ExperimentConfig& config);

struct EnergyRow {
  ExperimentConfig config;
  double axis_value = 0.0;
  PowerBudget power;
  double crlb_deg2 = 0.0;  // all-ones closed form
  double eta_ee = 0.0;
};

std::vector<EnergyRow> sweep_energy(const ExperimentConfig& config, const PowerModel& model = {});

struct ValidationGrid {
  std::vector<int> m_total{16, 32, 128};
  std::vector<int> m_per{1, 2, 4};
  std::vector<double> kappa{0.0, 0.25, 0.5, 1.0};
  std::vector<int> bits{1, 2, 3, 4, 5};
  std::vector<double> gamma{0.1, 1.0, 10.0};
  std::vector<double> theta0_deg{-60.0, -30.0, 0.0, 15.0, 45.0, 60.0};
  double spacing = 0.5;
};

struct ValidationPoint {
  int m_total = 0;
  int m_per = 0;
  double kappa = 0.0;
  int bits = 0;
  double gamma = 0.0;
  double theta0_deg = 0.0;
  double rel_gg = 0.0;  // |closed - oracle| / max(|oracle|, 1e-12 fully digital entry)
  double rel_tt = 0.0;
  double gt = 0.0;      // |oracle F_gt| / ||F||_F
};

struct ValidationReport {
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // combinations with non-integer kappa M_s
  double max_rel = 0.0;
  double max_gt = 0.0;
  ValidationPoint worst;
  std::vector<ValidationPoint> failing;  // rel_gg or rel_tt above tolerance
  std::size_t gt_exceeding = 0;          // oracle |F_gt| / ||F|| above gt_tolerance
  double tolerance = 1e-8;
  double gt_tolerance = 1e-10;

  bool ok() const { return failing.empty() && evaluated > 0; }
};

/// Closed form against the trace oracle (all-ones beamformer) at every grid point.
ValidationReport validate_oracle(const ValidationGrid& grid, int threads = 0,
                                 double tolerance = 1e-8);
ValidationReport validate_oracle_serial(const ValidationGrid& grid, double tolerance = 1e-8);

/// Configuration columns carried by every row.
std::vector<std::string> config_columns();
std::vector<std::string> config_cells(const ExperimentConfig& config);

CsvTable mc_table(const McResult& result);
CsvTable closed_form_table(const std::vector<ClosedFormRow>& rows, SweepAxis axis);
CsvTable ploss_table(const std::vector<ClosedFormRow>& rows, SweepAxis axis);
CsvTable energy_table(const std::vector<EnergyRow>& rows, SweepAxis axis);
CsvTable validation_table(const ValidationReport& report);

} // namespace hdoa
