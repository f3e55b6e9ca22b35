#include "robcons/nugap.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "robcons/case_study.hpp"
#include "robcons/synthesis.hpp"

namespace robcons {
namespace {

Matrix M1(double v) { return Matrix::Constant(1, 1, v); }

StateSpace Gain(double k) { return StateSpace::Gain(M1(k)); }

StateSpace UuvPlant(double lambda) {
  return StateSpace(uuv::A(), lambda * uuv::B(), uuv::C(), Matrix::Zero(3, 1));
}

// Random stable SISO plant of order 1 to 3 with feedthrough.
StateSpace RandomSiso(std::mt19937& rng) {
  std::uniform_int_distribution<int> order(1, 3);
  return oracle::random_stable_system(order(rng), 1, 1, rng, true);
}

TEST(WindingNumber, ConstantIsZero) {
  const std::vector<Complex> samples(100, Complex(1.0, 0.0));
  EXPECT_EQ(winding_number(samples), 0);
}

TEST(WindingNumber, AllPassWithOneRhpZero) {
  auto f = [](double w) {
    const Complex s(0.0, w);
    return (s - 1.0) / (s + 1.0);
  };
  const std::vector<Complex> samples = sample_contour(f, Complex(1.0, 0.0));
  EXPECT_EQ(winding_number(samples), 1);
  EXPECT_EQ(oracle::brute_force_winding(f, 200000), 1);
}

TEST(WindingNumber, RhpPoleCountsNegative) {
  auto f = [](double w) {
    const Complex s(0.0, w);
    return (s + 1.0) / (s - 1.0);
  };
  EXPECT_EQ(winding_number(sample_contour(f, Complex(1.0, 0.0))), -1);
}

TEST(WindingNumber, OriginCrossingIsRejected) {
  const std::vector<Complex> samples = {Complex(1, 0), Complex(0, 0), Complex(-1, 0)};
  try {
    winding_number(samples);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOriginCrossing);
  }
}

TEST(NuGap, IdenticalPlants) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const StateSpace P = oracle::random_plant(1 + trial % 4, 1 + trial % 2, 2, rng);
    const NuGapResult r = nu_gap(P, P);
    EXPECT_TRUE(r.winding_ok);
    EXPECT_TRUE(r.det_nonzero_ok);
    EXPECT_EQ(r.winding, 0);
    EXPECT_LE(r.value, 1e-8) << "trial " << trial;
  }
}

TEST(NuGap, IdenticalPlantsWithFeedthrough) {
  // Φ cancels to rounding level here, which stresses the H∞ bisection at tiny
  // gain levels.
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const StateSpace P = oracle::random_stable_system(1 + trial % 3, 1, 1, rng, true);
    EXPECT_LE(nu_gap(P, P).value, 1e-8) << "trial " << trial;
  }
}

TEST(NuGap, StaticGains) {
  const NuGapResult r = nu_gap(Gain(1.0), Gain(3.0));
  EXPECT_TRUE(r.winding_ok);
  EXPECT_TRUE(r.det_nonzero_ok);
  const double chordal = oracle::chordal_distance(Gain(1.0), Gain(3.0), {1.0});
  EXPECT_NEAR(chordal, 2.0 / std::sqrt(20.0), 1e-12);
  EXPECT_NEAR(r.value, chordal, 1e-6);
}

TEST(NuGap, SignFlipFailsWindingOrDet) {
  // 1 and −1 are antipodal on the Riemann sphere: the gap saturates.
  const NuGapResult r = nu_gap(Gain(1.0), Gain(-1.0));
  EXPECT_FALSE(r.winding_ok && r.det_nonzero_ok);
  EXPECT_EQ(r.value, 1.0);
}

TEST(NuGap, IntegratorVersusUnstablePole) {
  // 1/s vs 1/(s−1) differ in RHP pole count, still within a finite gap.
  const StateSpace P1(M1(0.0), M1(1.0), M1(1.0), M1(0.0));
  const StateSpace P2(M1(1.0), M1(1.0), M1(1.0), M1(0.0));
  const NuGapResult r = nu_gap(P1, P2);
  EXPECT_TRUE(r.winding_ok && r.det_nonzero_ok);
  const double chordal = oracle::chordal_distance(P1, P2, oracle::log_grid(1e-4, 1e4, 4000));
  EXPECT_NEAR(r.value, chordal, 2e-3);
}

TEST(NuGap, RandomSisoProperties) {
  std::mt19937 rng(17);
  const auto grid = oracle::log_grid(1e-4, 1e4, 4000);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const StateSpace P1 = RandomSiso(rng);
    const StateSpace P2 = RandomSiso(rng);
    const NuGapResult a = nu_gap(P1, P2);
    const NuGapResult b = nu_gap(P2, P1);
    EXPECT_NEAR(a.value, b.value, 1e-6) << "trial " << trial;
    EXPECT_GE(a.value, 0.0);
    EXPECT_LE(a.value, 1.0);
    const bool passes = a.winding_ok && a.det_nonzero_ok;
    EXPECT_EQ(a.value == 1.0, !passes || a.phi_norm == 1.0);
    if (passes) {
      EXPECT_NEAR(a.value, oracle::chordal_distance(P1, P2, grid), 2e-3)
          << "trial " << trial;
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(NuGap, TriangleInequality) {
  std::mt19937 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const StateSpace P1 = RandomSiso(rng);
    const StateSpace P2 = RandomSiso(rng);
    const StateSpace P3 = RandomSiso(rng);
    const NuGapResult d12 = nu_gap(P1, P2);
    const NuGapResult d23 = nu_gap(P2, P3);
    const NuGapResult d13 = nu_gap(P1, P3);
    const bool all_pass = d12.winding_ok && d12.det_nonzero_ok && d23.winding_ok &&
                          d23.det_nonzero_ok && d13.winding_ok && d13.det_nonzero_ok;
    if (!all_pass) continue;
    ++checked;
    EXPECT_LE(d13.value, d12.value + d23.value + 1e-5) << "trial " << trial;
  }
  EXPECT_GT(checked, 3);
}

TEST(NuGap, MimoMatchesChordalOracle) {
  // For Hurwitz plants with equal D the winding test passes trivially, so the
  // gap equals the pointwise chordal distance.
  std::mt19937 rng(29);
  const auto grid = oracle::log_grid(1e-3, 1e3, 2000);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpace P1 = oracle::random_stable_system(2, 2, 2, rng);
    const StateSpace P2(P1.A(), P1.B() * 1.3, P1.C(), P1.D());
    const NuGapResult r = nu_gap(P1, P2);
    ASSERT_TRUE(r.winding_ok && r.det_nonzero_ok);
    EXPECT_NEAR(r.value, oracle::chordal_distance(P1, P2, grid), 2e-3);
  }
}

TEST(NuGap, UuvFamilyClosedForm) {
  // Scaled-input family: δν(λ1, λ2) = |λ1 − λ2| / (λ1 + λ2).
  for (double lambda : {1.0, 3.0, 5.0}) {
    const NuGapResult r = nu_gap(UuvPlant(2.0), UuvPlant(lambda));
    EXPECT_TRUE(r.winding_ok && r.det_nonzero_ok);
    EXPECT_NEAR(r.value, std::abs(lambda - 2.0) / (lambda + 2.0), 1e-5);
  }
  const auto grid = oracle::log_grid(1e-4, 1e4, 4000);
  EXPECT_NEAR(nu_gap(UuvPlant(2.0), UuvPlant(5.0)).value,
              oracle::chordal_distance(UuvPlant(2.0), UuvPlant(5.0), grid), 2e-3);
}

TEST(MaxNuGap, Examples) {
  EXPECT_EQ(max_nu_gap(0, {Gain(2.0)}), 0.0);
  const std::vector<StateSpace> plants = {Gain(1.0), Gain(3.0)};
  EXPECT_NEAR(max_nu_gap(0, plants), 0.44721, 1e-5);
  EXPECT_NEAR(max_nu_gap(1, plants), 0.44721, 1e-5);
}

TEST(CentralPlant, SinglePlant) {
  const CentralPlant cp = central_plant(std::vector<StateSpace>{Gain(2.0)});
  EXPECT_EQ(cp.index, 0u);
  EXPECT_EQ(cp.eps, 0.0);
}

TEST(CentralPlant, TieGoesToLowestIndex) {
  const CentralPlant cp = central_plant(std::vector<StateSpace>{Gain(1.0), Gain(3.0)});
  EXPECT_EQ(cp.index, 0u);
}

TEST(CentralPlant, UuvFamily) {
  const PlantFamily family = build_plant_family(
      uuv::A(), uuv::B(), uuv::C(), build_eigenvalue_pool(uuv::canonical_bank()));
  const NuGapTable table(family.plants);
  ASSERT_EQ(table.size(), 29u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    EXPECT_EQ(table(i, i), 0.0);
    for (std::size_t j = 0; j < table.size(); ++j) {
      EXPECT_EQ(table(i, j), table(j, i));
      const double li = family.pool.lambdas[i];
      const double lj = family.pool.lambdas[j];
      EXPECT_NEAR(table(i, j), std::abs(li - lj) / (li + lj), 1e-4);
    }
  }
  const CentralPlant cp = central_plant(table);
  EXPECT_NEAR(family.pool.lambdas[cp.index], 2.0, 1e-9);
  EXPECT_NEAR(cp.eps, 3.0 / 7.0, 1e-4);
  EXPECT_NEAR(cp.eps, 0.4293, 0.05);
}

}  // namespace
}  // namespace robcons
