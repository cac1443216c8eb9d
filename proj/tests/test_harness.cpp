#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hdoa/harness.hpp"

using namespace hdoa;

namespace {

ExperimentConfig small_mc() {
  ExperimentConfig c;
  c.m_total = 16;
  c.m_per = 2;
  c.kappa = 1.0;
  c.theta0_deg = 23.0;
  c.trials = 200;
  c.seed = 42;
  c.sweep = parse_sweep("snr_db=0:20:10");
  return c;
}

McPoint point_with_rmse(double r, int n) {
  McPoint p;
  p.rmse_deg = r;
  p.completed = n;
  return p;
}

} // namespace

TEST_CASE("rmse") {
  const std::vector<double> zeros(5, 0.0);
  CHECK(rmse(zeros) == 0.0);
  const std::vector<double> pm{1.0, -1.0, 1.0, -1.0};
  CHECK(rmse(pm) == 1.0);
  const std::vector<double> e{3.0, 4.0};
  CHECK(rmse(e) == doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS_AS(rmse(std::span<const double>{}), ConfigError);
}

TEST_CASE("parallel Monte Carlo equals the serial reference") {
  const ExperimentConfig c = small_mc();
  const McResult serial = monte_carlo_rmse_serial(c);
  for (int threads : {1, 3, 8}) {
    const McResult par = monte_carlo_rmse(c, threads);
    REQUIRE(par.points.size() == serial.points.size());
    for (std::size_t i = 0; i < par.points.size(); ++i) {
      CHECK(par.points[i].rmse_deg == serial.points[i].rmse_deg);
      CHECK(par.points[i].crlb_deg2 == serial.points[i].crlb_deg2);
      CHECK(par.points[i].completed == serial.points[i].completed);
    }
  }
  CHECK(serial.ok());
  CHECK(serial.axis == SweepAxis::snr_db);
  CHECK(serial.points[0].crlb_deg2 > serial.points[2].crlb_deg2);
  CHECK(serial.points[0].rmse_deg > serial.points[2].rmse_deg);

  ExperimentConfig other = c;
  other.seed = 43;
  CHECK(monte_carlo_rmse(other, 2).points[0].rmse_deg != serial.points[0].rmse_deg);
}

TEST_CASE("SNR monotonicity check") {
  std::vector<McPoint> pts{point_with_rmse(2.0, 400), point_with_rmse(1.0, 400),
                           point_with_rmse(1.1, 400)};
  // 10% rise with 4/sqrt(400) = 20% tolerance is noise.
  CHECK(rmse_nonincreasing_in_snr(pts, SweepAxis::snr_db));
  pts[2].rmse_deg = 1.5;
  CHECK_FALSE(rmse_nonincreasing_in_snr(pts, SweepAxis::snr_db));
  CHECK(rmse_nonincreasing_in_snr(pts, SweepAxis::bits));
}

TEST_CASE("failure cap") {
  McPoint p;
  p.completed = 0;
  CHECK(p.over_failure_cap());
  p.completed = 990;
  p.failed = 10;
  CHECK_FALSE(p.over_failure_cap());
  p.failed = 11;
  CHECK(p.over_failure_cap());
}

TEST_CASE("closed-form sweeps") {
  ExperimentConfig c;
  c.m_per = 1;
  c.kappa = 1.0;
  auto rows = sweep_closed_form(c);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].report.eta_pl - 1.0) < 1e-10);

  // Loss decreases with resolution for every SNR.
  c.m_per = 4;
  c.kappa = 0.25;
  for (double snr : {-10.0, 0.0, 10.0}) {
    c.snr_db = snr;
    c.sweep = parse_sweep("bits=1:8:1");
    rows = sweep_closed_form(c);
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i].report.eta_pl < rows[i - 1].report.eta_pl);
    for (const auto& r : rows) CHECK(r.eta_pl_ratio == doctest::Approx(r.report.eta_pl).epsilon(1e-10));
  }

  c.sweep = parse_sweep("bits=1:12:1");
  c.m_per = 1;
  c.kappa = 0.0;
  const auto e = sweep_energy(c);
  REQUIRE(e.size() == 12);
  for (const auto& r : e)
    CHECK(r.eta_ee == doctest::Approx(1.0 / (std::sqrt(r.crlb_deg2) * r.power.p_total)));
}

TEST_CASE("oracle validation") {
  ValidationGrid g;
  g.m_total = {16, 32};
  g.bits = {1, 3};
  g.gamma = {1.0};
  const ValidationReport serial = validate_oracle_serial(g);
  const ValidationReport par = validate_oracle(g, 4);
  CHECK(serial.ok());
  CHECK(serial.evaluated == 2 * 3 * 4 * 2 * 6 - serial.skipped);
  CHECK(serial.max_rel < 1e-8);
  CHECK(par.evaluated == serial.evaluated);
  CHECK(par.max_rel == serial.max_rel);
  CHECK(par.max_gt == serial.max_gt);
  CHECK(par.gt_exceeding == serial.gt_exceeding);

  ValidationGrid one;
  one.m_total = {16};
  one.m_per = {1};
  one.kappa = {1.0};
  one.bits = {3};
  one.gamma = {1.0};
  one.theta0_deg = {15.0};
  const ValidationReport r = validate_oracle(one, 1);
  CHECK(r.evaluated == 1);
  CHECK(r.gt_exceeding == 0);
  CHECK(validation_table(r).rows.size() == 1);

  CHECK_FALSE(validate_oracle(one, 1, -1.0).ok());
}

TEST_CASE("CSV output") {
  CsvTable t;
  t.columns = {"a", "b"};
  t.add_row({"1", "x"});
  CHECK_THROWS_AS(t.add_row({"1"}), ConfigError);
  std::ostringstream out;
  write_csv(out, {{"seed", "7"}, {"command", "mc"}}, t);
  CHECK(out.str() == "# seed=7\n# command=mc\na,b\n1,x\n");
  CHECK(csv_body(out.str()) == "a,b\n1,x\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3) == "0.333333333333");

  ExperimentConfig c = small_mc();
  c.trials = 20;
  const CsvTable mc = mc_table(monte_carlo_rmse(c, 2));
  CHECK(mc.rows.size() == 3);
  CHECK(mc.columns.front() == "point");
  CHECK(mc.columns.size() == 3 + config_columns().size() + 6);
  CHECK(mc.rows[1][1] == "snr_db");
}
