#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "spacefill/metrics.hpp"
#include "spacefill/samplers.hpp"

using namespace spacefill;

namespace {

SampleSet random_set(Rng& rng, std::size_t n, std::size_t d) {
  return random_sampling(Domain::unit(d), n, rng);
}

}  // namespace

TEST(NnStats, HandValues1D) {
  const SampleSet s = SampleSet::from_points(Domain::unit(1), {{0.0}, {0.4}, {1.0}});
  const NnStats st = nn_stats(s);
  EXPECT_NEAR(st.min, 0.4, 1e-12);
  EXPECT_NEAR(st.avg, 1.4 / 3.0, 1e-12);
  EXPECT_NEAR(st.max, 0.6, 1e-12);
}

TEST(NnStats, EqualsOracleUpTo500Points) {
  Rng rng(2);
  for (std::size_t n : {2u, 17u, 120u, 500u}) {
    const SampleSet s = random_set(rng, n, 3);
    const auto o = oracle::nn_distances(oracle::unit_points(s));
    const NnStats st = nn_stats(s);
    EXPECT_EQ(st.min, *std::min_element(o.begin(), o.end()));
    EXPECT_EQ(st.max, *std::max_element(o.begin(), o.end()));
  }
}

TEST(PhiP, SinglePairClosedForm) {
  const SampleSet s = SampleSet::from_points(Domain::unit(1), {{0.25}, {0.75}});
  EXPECT_NEAR(phi_p(s, 50), 2.0, 1e-12);
}

TEST(PhiP, EquilateralTripleClosedForm) {
  const double h = std::sqrt(3.0) / 2.0;
  // Unit side length inside a box of side 1 so the unit frame is the identity.
  const SampleSet s = SampleSet::from_points(Domain::unit(2), {{0.0, 0.0}, {1.0, 0.0}, {0.5, h}});
  // The third side is only approximately 1 after rounding.
  EXPECT_NEAR(phi_p(s, 50), std::pow(3.0, 1.0 / 50.0), 1e-12);
}

TEST(PhiP, HugeExponentDoesNotOverflow) {
  Rng rng(3);
  const SampleSet s = random_set(rng, 300, 2);
  const double v = phi_p(s, 50);
  EXPECT_TRUE(std::isfinite(v));
  const double dmin = min_pair(s).distance;
  EXPECT_GE(v, (1.0 / dmin) * (1 - 1e-12));
}

TEST(PhiP, DuplicatePointsNameThePair) {
  const SampleSet s =
      SampleSet::from_points(Domain::unit(2), {{0.1, 0.1}, {0.5, 0.5}, {0.9, 0.9}, {0.5, 0.5}});
  try {
    phi_p(s, 50);
    FAIL() << "expected DuplicatePoints";
  } catch (const DuplicatePoints& e) {
    EXPECT_EQ(e.first(), 1u);
    EXPECT_EQ(e.second(), 3u);
  }
}

TEST(PhiP, BoundsAndMonotonicity) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.index(60);
    const SampleSet s = random_set(rng, n, 1 + rng.index(5));
    const double dmin = min_pair(s).distance;
    for (int p : {1, 5, 50}) {
      const double v = phi_p(s, p);
      const double pairs = static_cast<double>(n * (n - 1) / 2);
      EXPECT_GE(v, (1.0 / dmin) * (1 - 1e-12));
      EXPECT_LE(v, std::pow(pairs, 1.0 / p) / dmin * (1 + 1e-12));
    }
    std::vector<Point> fewer = s.points();
    fewer.pop_back();
    const SampleSet t = SampleSet::from_points(s.domain(), fewer);
    EXPECT_LE(phi_p(t, 50), phi_p(s, 50) * (1 + 1e-12));
  }
}

TEST(Cl2, SinglePointHandValue) {
  const SampleSet s = SampleSet::from_points(Domain::unit(1), {{0.5}});
  EXPECT_NEAR(cl2_discrepancy(s), std::sqrt(1.0 / 12.0), 1e-12);
}

TEST(Cl2, HandValue1DTriple) {
  const SampleSet s = SampleSet::from_points(Domain::unit(1), {{0.0}, {0.4}, {1.0}});
  EXPECT_NEAR(cl2_discrepancy(s), oracle::cl2(s.points()), 1e-12);
}

TEST(Cl2, OutsideUnitCubeIsAnError) {
  const SampleSet s = SampleSet::from_points(Domain({0.0}, {2.0}), {{1.5}});
  EXPECT_THROW(cl2_discrepancy(s), std::invalid_argument);
}

TEST(Cl2, PermutationInvariance) {
  Rng rng(5);
  const SampleSet s = random_set(rng, 40, 4);
  std::vector<Point> rows = s.points();
  std::reverse(rows.begin(), rows.end());
  for (Point& p : rows) std::rotate(p.begin(), p.begin() + 1, p.end());
  const SampleSet t = SampleSet::from_points(Domain::unit(4), rows);
  EXPECT_NEAR(cl2_discrepancy(s), cl2_discrepancy(t), 1e-12);
}

TEST(Metrics, MatchOraclesOnRandomSets) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(199);
    const std::size_t d = 1 + rng.index(10);
    const SampleSet s = random_set(rng, n, d);
    const auto u = oracle::unit_points(s);
    const auto nn = oracle::nn_distances(u);
    double avg = 0.0;
    for (double v : nn) avg += v;
    avg /= static_cast<double>(n);
    const NnStats st = nn_stats(s);
    EXPECT_NEAR(st.avg, avg, 1e-12 * avg);
    EXPECT_NEAR(min_pair(s).distance, oracle::min_pair(u).d, 1e-12 * oracle::min_pair(u).d);
    EXPECT_NEAR(cl2_discrepancy(s), oracle::cl2(u), 1e-12 * oracle::cl2(u));
    const double ph = oracle::phi_p(u, 50);
    EXPECT_NEAR(phi_p(s, 50), ph, 1e-12 * ph);
  }
}

TEST(QualityReport, CollectsEverything) {
  Rng rng(7);
  const SampleSet s = random_set(rng, 30, 2);
  const QualityReport q = quality_report(s, 10);
  EXPECT_EQ(q.n, 30u);
  EXPECT_EQ(q.d, 2u);
  EXPECT_EQ(q.p, 10);
  EXPECT_EQ(q.nn_avg, nn_stats(s).avg);
  EXPECT_EQ(q.phi_p, phi_p(s, 10));
  EXPECT_EQ(q.cl2, cl2_discrepancy(s));
}
