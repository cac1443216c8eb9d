#include <doctest.h>

#include <cmath>
#include <random>

#include "hdoa/beamformer.hpp"
#include "hdoa/synth.hpp"

using namespace hdoa;

TEST_CASE("3 dB beamwidth and coverage requirement") {
  CHECK(beamwidth_3db(ArrayGeometry(16, 2)) == doctest::Approx(50.8));
  CHECK(beamwidth_3db(ArrayGeometry(16, 1)) == doctest::Approx(101.6));
  CHECK(beamwidth_3db(ArrayGeometry(32, 4)) == doctest::Approx(25.4));
  CHECK(min_subarrays_for_coverage(ArrayGeometry(32, 4)) == 8);
  CHECK(min_subarrays_for_coverage(ArrayGeometry(16, 2)) == 4);
}

TEST_CASE("coverage beam angles") {
  const AnalogBeamformer ab8 = design_coverage_ab(ArrayGeometry(16, 2));
  REQUIRE(ab8.beam_angles.size() == 8);
  CHECK(rad2deg(ab8.beam_angles.front()) == doctest::Approx(-78.75));
  CHECK(rad2deg(ab8.beam_angles.back()) == doctest::Approx(78.75));

  const AnalogBeamformer ab2 = design_coverage_ab(ArrayGeometry(2, 1));
  CHECK(rad2deg(ab2.beam_angles[0]) == doctest::Approx(-45.0));
  CHECK(rad2deg(ab2.beam_angles[1]) == doctest::Approx(45.0));

  for (const ArrayGeometry& g : {ArrayGeometry(16, 2), ArrayGeometry(64, 4), ArrayGeometry(64, 2)}) {
    const AnalogBeamformer ab = design_coverage_ab(g);
    const int ms = g.m_sub();
    for (int s = 0; s < ms; ++s) {
      CHECK(ab.beam_angles[s] == doctest::Approx(-ab.beam_angles[ms - 1 - s]).epsilon(1e-12));
      // Sector s is [-90 + 180 s / M_s, -90 + 180 (s + 1) / M_s] degrees.
      CHECK(rad2deg(ab.beam_angles[s]) == doctest::Approx(-90.0 + 180.0 * (s + 0.5) / ms));
      if (s > 0) CHECK(ab.beam_angles[s] - ab.beam_angles[s - 1] == doctest::Approx(kPi / ms));
    }
  }
}

TEST_CASE("coverage design rejects too few subarrays") {
  CHECK_THROWS_AS(design_coverage_ab(ArrayGeometry(16, 4)), ConfigError);
  CHECK_THROWS_AS(design_coverage_ab(ArrayGeometry(4, 2)), ConfigError);
}

TEST_CASE("beamformer structure: unit-norm disjoint columns") {
  for (const ArrayGeometry& g : {ArrayGeometry(16, 2), ArrayGeometry(32, 4), ArrayGeometry(8, 1)}) {
    for (const AnalogBeamformer& ab : {all_ones_ab(g), design_coverage_ab(g)}) {
      const CMatrix v = ab.matrix();
      CHECK(v.rows() == g.m_total());
      CHECK(v.cols() == g.m_sub());
      for (int r = 0; r < v.rows(); ++r)
        for (int c = 0; c < v.cols(); ++c) {
          const bool in_block = r / g.m_per() == c;
          if (in_block)
            CHECK(std::abs(v(r, c)) == doctest::Approx(1.0 / std::sqrt(g.m_per())));
          else
            CHECK(v(r, c) == Complex(0.0, 0.0));
        }
      CHECK((v.adjoint() * v - CMatrix::Identity(g.m_sub(), g.m_sub())).norm() < 1e-12);
    }
  }
  CHECK((all_ones_ab(ArrayGeometry(8, 1)).matrix() - CMatrix::Identity(8, 8)).norm() == 0.0);
  const CMatrix half = all_ones_ab(ArrayGeometry(16, 4)).weights;
  CHECK((half.array() - Complex(0.5, 0.0)).abs().maxCoeff() == 0.0);
}

TEST_CASE("coverage weights steer each beam") {
  const ArrayGeometry g(16, 2);
  const AnalogBeamformer ab = design_coverage_ab(g);
  for (int s = 0; s < g.m_sub(); ++s)
    for (int e = 0; e < g.m_per(); ++e) {
      const double expected = 2 * kPi * e * g.spacing() * std::sin(ab.beam_angles[s]);
      // V_A^H applies exp(-j phase), so the stored weight carries +phase.
      CHECK(std::abs(ab.weights(s, e) - std::polar(1.0 / std::sqrt(2.0), expected)) < 1e-14);
    }
}

TEST_CASE("apply_analog examples") {
  const ArrayGeometry g(12, 3);
  const CVector y = apply_analog(all_ones_ab(g), steering_vector(g, 0.0) * Complex(2.0, -1.0));
  for (int s = 0; s < g.m_sub(); ++s)
    CHECK(std::abs(y[s] - std::sqrt(3.0) * Complex(2.0, -1.0)) < 1e-13);

  const ArrayGeometry g1(5, 1);
  const CVector x = steering_vector(g1, 0.4);
  CHECK((apply_analog(all_ones_ab(g1), x) - x).norm() < 1e-15);

  const ArrayGeometry gc(32, 4);
  const AnalogBeamformer ab = design_coverage_ab(gc);
  for (int s = 0; s < gc.m_sub(); ++s) {
    const CVector out = apply_analog(ab, steering_vector(gc, ab.beam_angles[s]));
    CHECK(std::abs(out[s]) == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(apply_analog(ab, CVector::Ones(31)), ConfigError);
}

TEST_CASE("subarray gain") {
  const ArrayGeometry g(16, 4);
  CHECK(std::abs(subarray_gain(g, 0.3, 0.3) - Complex(2.0, 0.0)) < 1e-12);
  CHECK(std::abs(subarray_gain(ArrayGeometry(8, 1), 0.9, -0.4) - Complex(1.0, 0.0)) < 1e-12);
  const Complex d = subarray_gain(ArrayGeometry(16, 2), deg2rad(30.0), 0.0);
  CHECK(std::abs(d - std::polar(1.0, kPi / 4)) < 1e-12);

  // |delta| matches the chain gain of the coverage beam.
  const ArrayGeometry gc(32, 4);
  const AnalogBeamformer ab = design_coverage_ab(gc);
  const RVector gains = chain_gains(gc, ab, 0.37);
  for (int s = 0; s < gc.m_sub(); ++s)
    CHECK(std::norm(subarray_gain(gc, 0.37, ab.beam_angles[s])) ==
          doctest::Approx(gains[s]).epsilon(1e-10));

  for (double base : {0.0, 0.5, -1.1}) {
    const double u = std::sin(base);
    for (double off : {1e-8, -1e-8}) {
      const Complex at = subarray_gain(g, base, base);
      const Complex near = subarray_gain(g, std::asin(u + off), base);
      CHECK(std::abs(at - near) < 1e-6);
    }
  }
}

TEST_CASE("energy normalization") {
  SnapshotBlock unit;
  unit.data = CMatrix::Ones(4, 3);
  DigitalCombiner c{CVector::Ones(3), RVector::Ones(3)};
  CHECK((energy_normalize(unit, c).data - unit.data).norm() == 0.0);

  SnapshotBlock scaled;
  scaled.data = CMatrix::Ones(4, 2);
  scaled.data.col(1) *= 4.0;
  c = {CVector::Ones(2), chain_powers(scaled).cwiseSqrt()};
  CHECK(chain_powers(energy_normalize(scaled, c)).isApprox(RVector::Ones(2)));

  SnapshotBlock dead;
  dead.data = CMatrix::Zero(3, 2);
  dead.data(0, 0) = 1.0;
  c = {CVector::Ones(2), chain_powers(dead).cwiseSqrt()};
  CHECK_THROWS_AS(energy_normalize(dead, c), NumericalError);
}

TEST_CASE("noiseless normalized chains follow the virtual array phase up to sign") {
  const ArrayGeometry g(16, 2);
  const AnalogBeamformer ab = design_coverage_ab(g);
  for (double deg : {23.0, -41.0, 73.0}) {
    const double t = deg2rad(deg);
    const std::vector<Complex> symbols = {{1.0, 0.5}, {-0.3, 0.8}, {0.2, -1.1}};
    const SnapshotBlock block = noiseless_snapshots(g, ab, t, symbols);
    const DigitalCombiner comb = DigitalCombiner::from_block(g, ab, block);
    for (int s = 0; s < g.m_sub(); ++s) CHECK(std::abs(comb.phase_diag[s]) == doctest::Approx(1.0));
    const SnapshotBlock out = energy_normalize(block, comb);
    for (int n = 0; n < 3; ++n) {
      const Complex ref = out.data(n, 0);
      for (int s = 1; s < g.m_sub(); ++s) {
        const Complex expected = std::polar(1.0, 2 * kPi * s * g.m_per() * g.spacing() * std::sin(t));
        const Complex r = out.data(n, s) / (ref * expected);
        CHECK(std::abs(r.imag()) < 1e-10);
        CHECK(std::abs(std::abs(r.real()) - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("analog combining keeps unit white noise white") {
  const ArrayGeometry g(16, 4);
  const AnalogBeamformer ab = design_coverage_ab(ArrayGeometry(32, 4));
  const AnalogBeamformer ones = all_ones_ab(g);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (const AnalogBeamformer* b : {&ones, &ab}) {
    const int m = b->m_sub() * b->m_per();
    const int n = 100000;
    CMatrix acc = CMatrix::Zero(b->m_sub(), b->m_sub());
    CVector x(m);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) x[k] = {normal(rng), normal(rng)};
      const CVector y = apply_analog(*b, x);
      acc += y * y.adjoint();
    }
    acc /= n;
    CHECK((acc - CMatrix::Identity(b->m_sub(), b->m_sub())).cwiseAbs().maxCoeff() < 0.02);
  }
}
