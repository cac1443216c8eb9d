#include <doctest.h>

#include <cmath>

#include "hdoa/crlb.hpp"
#include "hdoa/synth.hpp"

using namespace hdoa;

namespace {

double rel_frobenius(const CMatrix& a, const CMatrix& ref) { return (a - ref).norm() / ref.norm(); }

} // namespace

TEST_CASE("substreams are distinct and deterministic") {
  CHECK(substream_seed(1, 0, 0) == substream_seed(1, 0, 0));
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 0, 1));
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 1, 0));
  CHECK(substream_seed(1, 0, 0) != substream_seed(2, 0, 0));
}

TEST_CASE("same seed gives bit-identical blocks") {
  const ArrayGeometry g(16, 2);
  const AnalogBeamformer ab = design_coverage_ab(g);
  const AdcProfile p = AdcProfile::make(2, 8, 0.25);
  const SourceTruth truth{deg2rad(23.0), 10.0, 64};
  const SnapshotBlock a = generate_snapshots(g, ab, p, truth, 99);
  const SnapshotBlock b = generate_snapshots(g, ab, p, truth, 99);
  const SnapshotBlock c = generate_snapshots(g, ab, p, truth, 100);
  CHECK(a.data == b.data);
  CHECK(a.seed_trace == 99);
  CHECK(a.data != c.data);
  CHECK(a.data.allFinite());
  CHECK(a.snapshots() == 64);
  CHECK(a.chains() == 8);
}

TEST_CASE("no signal gives unit-variance chains") {
  const ArrayGeometry g(8, 2);
  const SnapshotBlock block = generate_snapshots(g, all_ones_ab(g), AdcProfile::make(3, 4, 1.0),
                                                 {0.2, 0.0, 100000}, 5);
  const RVector powers = chain_powers(block);
  for (int s = 0; s < 4; ++s) {
    CHECK(powers[s] > 0.97);
    CHECK(powers[s] < 1.03);
  }
  CHECK(rel_frobenius(sample_covariance(block), CMatrix::Identity(4, 4)) < 0.03);
}

TEST_CASE("sample covariance") {
  SnapshotBlock one;
  one.data.resize(1, 2);
  one.data << Complex(1, 0), Complex(0, 1);
  const CMatrix r = sample_covariance(one);
  CHECK(r(0, 0) == Complex(1, 0));
  CHECK(r(0, 1) == Complex(0, -1));
  CHECK(r(1, 0) == Complex(0, 1));
  CHECK(r(1, 1) == Complex(1, 0));

  const ArrayGeometry g(16, 2);
  const SnapshotBlock block = generate_snapshots(g, design_coverage_ab(g),
                                                 AdcProfile::make(2, 8, 0.5), {0.4, 3.0, 50}, 1);
  const CMatrix s = sample_covariance(block);
  CHECK(s == s.adjoint());
  SnapshotBlock empty;
  CHECK_THROWS_AS(sample_covariance(empty), ConfigError);
}

TEST_CASE("unquantized covariance converges to the model") {
  const ArrayGeometry g(8, 2);
  const AnalogBeamformer ab = all_ones_ab(g);
  const AdcProfile p = AdcProfile::make(3, 4, 1.0);
  const SnapshotBlock block = generate_snapshots(g, ab, p, {0.0, 10.0, 100000}, 17);
  CHECK(rel_frobenius(sample_covariance(block), model_covariance(g, ab, p, 10.0, 0.0)) < 0.03);
}

TEST_CASE("quantized covariance converges to the AQNM model") {
  const ArrayGeometry g(8, 2);
  const AnalogBeamformer ab = all_ones_ab(g);
  std::uint64_t seed = 40;
  struct Point {
    int bits;
    double kappa;
    double gamma;
  };
  // The linearization is accurate for b >= 3; one bit only at low SNR.
  const Point points[] = {{3, 0.0, 0.1}, {3, 0.0, 1.0}, {3, 0.5, 10.0}, {4, 0.0, 10.0},
                          {5, 0.5, 1.0}, {5, 0.0, 10.0}, {1, 0.0, 0.1},  {2, 0.5, 0.1}};
  for (const Point& pt : points) {
    for (double deg : {0.0, 20.0}) {
      CAPTURE(pt.bits);
      CAPTURE(pt.kappa);
      CAPTURE(pt.gamma);
      CAPTURE(deg);
      const AdcProfile p = AdcProfile::make(pt.bits, 4, pt.kappa);
      const double t = deg2rad(deg);
      const SnapshotBlock block = generate_snapshots(g, ab, p, {t, pt.gamma, 100000}, ++seed);
      CHECK(rel_frobenius(sample_covariance(block), model_covariance(g, ab, p, pt.gamma, t)) <
            0.03);
    }
  }
}

TEST_CASE("synth input validation") {
  const ArrayGeometry g(8, 2);
  const AdcProfile p = AdcProfile::make(3, 4, 1.0);
  CHECK_THROWS_AS(generate_snapshots(g, all_ones_ab(g), p, {0.0, 1.0, 0}, 1), ConfigError);
  CHECK_THROWS_AS(generate_snapshots(g, all_ones_ab(g), p, {0.0, -1.0, 4}, 1), ConfigError);
  CHECK_THROWS_AS(generate_snapshots(g, all_ones_ab(g), AdcProfile::make(3, 2, 1.0), {0.0, 1.0, 4}, 1),
                  ConfigError);
}
