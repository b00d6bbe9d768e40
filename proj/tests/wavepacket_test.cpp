#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qmirror/wavepacket.hpp"

namespace {

using namespace qmirror::wavepacket;
using qmirror::DomainError;

TEST(GaussianPacket, EnforcesUncertaintyRelation) {
  EXPECT_THROW((GaussianPacket{0.0, 1.0, 0.0, 0.4, 1.0}), DomainError);
  EXPECT_NO_THROW((GaussianPacket{0.0, 1.0, 0.0, 0.5, 1.0}));
  EXPECT_THROW((GaussianPacket{0.0, -1.0, 0.0, 0.5, 1.0}), DomainError);
  EXPECT_THROW((GaussianPacket{0.0, 1.0, 0.0, 0.5, 0.0}), DomainError);
  const auto p = GaussianPacket::minimum_uncertainty(0.0, 3.0, 1.0);
  EXPECT_NEAR(p.dp * p.dx0, 0.5, 1e-15);
}

TEST(GaussianPacket, AmplitudeIsNormalised) {
  const GaussianPacket p{1.5, 0.7, 2.0, 1.0, 1.0};
  const auto grid = discretize(p);
  EXPECT_NEAR(grid.norm(), 1.0, 1e-8);
}

TEST(OverlapGaussian, Examples) {
  const GaussianPacket unit{0.0, 1.0, 0.0, 0.5, 1.0};
  EXPECT_EQ(overlap_gaussian(unit, 0.0), std::complex<double>(1.0, 0.0));

  // Quadrature oracle, 4097 points: exp(-0.5).
  const auto q = oracles::gaussian_overlap_quadrature(1.0, 0.0, 2.0, 4097);
  EXPECT_NEAR(q.real(), 0.6065306597126334, 1e-10);
  EXPECT_NEAR(std::abs(overlap_gaussian(unit, 2.0) - q), 0.0, 1e-10);

  const GaussianPacket wide{0.0, 10.0, 0.0, 0.05, 1.0};
  const auto q_wide = oracles::gaussian_overlap_quadrature(10.0, 0.0, 1.0, 4097);
  EXPECT_NEAR(q_wide.real(), 0.9987507809245809, 1e-10);
  EXPECT_NEAR(std::abs(overlap_gaussian(wide, 1.0) - q_wide), 0.0, 1e-10);
}

TEST(OverlapGaussian, PhaseFollowsMeanPosition) {
  const GaussianPacket p{0.0, 1.0, 0.3, 0.5, 1.0};
  const auto z = overlap_gaussian(p, 2.0);
  const auto q = oracles::gaussian_overlap_quadrature(1.0, 0.3, 2.0, 4097);
  EXPECT_NEAR(std::arg(z), 0.6, 1e-12);
  EXPECT_NEAR(std::abs(z - q), 0.0, 1e-10);
}

TEST(OverlapLog, GeneralPairMatchesQuadrature) {
  const GaussianPacket a{0.2, 0.8, -0.4, 1.0, 1.0};
  const GaussianPacket b{1.1, 1.3, 0.5, 1.0, 1.0};
  const auto ga = sample(a, -15.0, 30.0 / 8192.0, 8193);
  const auto gb = sample(b, -15.0, 30.0 / 8192.0, 8193);
  const auto numeric = overlap_grid(ga, gb);
  EXPECT_NEAR(std::abs(overlap_log(a, b).value() - numeric), 0.0, 1e-10);
}

TEST(OverlapGrid, Examples) {
  const GaussianPacket unit{0.0, 1.0, 0.0, 0.5, 1.0};
  const auto a = discretize(unit);
  EXPECT_NEAR(std::abs(overlap_grid(a, a) - 1.0), 0.0, 1e-8);

  const auto b = sample(momentum_shift(unit, 2.0), a.p_min, a.p_step, a.size());
  EXPECT_NEAR(std::abs(overlap_grid(a, b) - std::exp(-0.5)), 0.0, 1e-6);

  GridPacket left{0.0, 1.0, std::vector<cplx>(300, cplx{0.0, 0.0})};
  GridPacket right = left;
  for (int i = 0; i < 100; ++i) left.amplitudes[static_cast<std::size_t>(i)] = 0.1;
  for (int i = 200; i < 300; ++i) right.amplitudes[static_cast<std::size_t>(i)] = 0.1;
  EXPECT_NEAR(std::abs(overlap_grid(left, right)), 0.0, 1e-12);

  const auto other = discretize(unit, 2049);
  EXPECT_THROW(overlap_grid(a, other), DomainError);
}

TEST(MomentumShift, Gaussian) {
  const GaussianPacket p{0.0, 1.0, 0.25, 0.7, 3.0};
  const auto shifted = momentum_shift(p, 2.0);
  EXPECT_EQ(shifted.p0, 2.0);
  EXPECT_EQ(shifted.dp, p.dp);
  EXPECT_EQ(shifted.x0, p.x0);
  EXPECT_EQ(shifted.dx0, p.dx0);
  EXPECT_EQ(shifted.M, p.M);

  const auto same = momentum_shift(p, 0.0);
  EXPECT_EQ(same.p0, p.p0);

  EXPECT_NEAR(std::abs(overlap_log(p, shifted).value() - overlap_gaussian(p, 2.0)), 0.0, 1e-14);
}

TEST(MomentumShift, GridMatchesResampling) {
  const GaussianPacket p{0.0, 1.0, 0.4, 0.5, 1.0};
  const auto grid = discretize(p, 4097, 14.0);
  // Whole steps plus a fraction of a step.
  for (double shift : {0.0, 1.0, 2.0, 2.0 + 0.37 * grid.p_step, -1.3}) {
    const auto moved = momentum_shift(grid, shift);
    const auto expected = sample(momentum_shift(p, shift), grid.p_min, grid.p_step, grid.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(moved.amplitudes[i] - expected.amplitudes[i]));
    }
    EXPECT_LT(worst, 1e-9) << "shift " << shift;
    EXPECT_NEAR(moved.norm(), grid.norm(), 1e-8);
    EXPECT_NEAR(std::abs(overlap_grid(grid, moved) - overlap_gaussian(p, shift)), 0.0, 1e-8);
  }
  EXPECT_THROW(momentum_shift(grid, 1e6), DomainError);
}

TEST(Spread, LinearLaw) {
  const GaussianPacket p{0.0, 2.0, 0.0, 1.0, 4.0};
  EXPECT_EQ(spread_at_time(p, 0.0), 1.0);
  EXPECT_EQ(spread_at_time(p, 2.0), 2.0);
  EXPECT_THROW(spread_at_time(p, -1.0), DomainError);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double a = t(rng), b = t(rng);
    EXPECT_NEAR(spread_at_time(p, 0.5 * (a + b)), 0.5 * (spread_at_time(p, a) + spread_at_time(p, b)), 1e-12);
  }
}

TEST(Displacement, Examples) {
  EXPECT_EQ(displacement(2.0, 4.0, 2.0), 1.0);
  EXPECT_EQ(displacement(0.0, 4.0, 123.0), 0.0);
  EXPECT_THROW(displacement(1.0, 4.0, -1.0), DomainError);

  // Long-time ratio tends to delta_p / dp.
  const GaussianPacket p{0.0, 0.5, 0.0, 1.0, 10.0};
  const double delta_p = 3.0;
  const double t = 1e6 * p.M * p.dx0 / p.dp;
  EXPECT_NEAR(displacement(delta_p, p.M, t) / spread_at_time(p, t), delta_p / p.dp, 1e-4);
}

TEST(GridCsv, RoundTrip) {
  const GaussianPacket p{0.0, 1.0, 0.2, 0.5, 1.0};
  const auto grid = discretize(p, 513);
  std::stringstream buf;
  write_csv(buf, grid);
  const auto back = read_csv(buf);
  ASSERT_EQ(back.size(), grid.size());
  EXPECT_NEAR(back.p_step, grid.p_step, 1e-15);
  EXPECT_NEAR(std::abs(overlap_grid(back, grid) - 1.0), 0.0, 1e-8);

  std::stringstream bad("x,y\n1,2\n");
  EXPECT_THROW(read_csv(bad), qmirror::ConfigError);
}

TEST(WavepacketProperty, ClosedFormMatchesGridOverlap) {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> log_dp(-2.0, 2.0);
  std::uniform_real_distribution<double> frac(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double dp = std::pow(10.0, log_dp(rng));
    const double shift = frac(rng) * dp;
    const GaussianPacket p{0.0, dp, pos(rng) / dp, 0.5 / dp, 1.0};
    const double lo = std::min(0.0, shift) - 10.0 * dp;
    const double hi = std::max(0.0, shift) + 10.0 * dp;
    const std::size_t n = 4097;
    const double step = (hi - lo) / static_cast<double>(n - 1);
    const auto a = sample(p, lo, step, n);
    const auto b = sample(momentum_shift(p, shift), lo, step, n);
    ASSERT_NEAR(std::abs(overlap_grid(a, b) - overlap_gaussian(p, shift)), 0.0, 1e-6);
  }
}

TEST(WavepacketProperty, MagnitudeMonotonicity) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double dp = u(rng);
    const double d1 = u(rng), d2 = d1 * (1.0 + u(rng));
    const GaussianPacket p{0.0, dp, 0.0, 0.5 / dp, 1.0};
    const GaussianPacket wider{0.0, dp * 1.5, 0.0, 0.5 / dp, 1.0};
    const double a = std::abs(overlap_gaussian(p, d1));
    const double b = std::abs(overlap_gaussian(p, d2));
    if (a > 0.0) { EXPECT_GT(a, b); }
    if (a > 0.0 && a < 1.0) { EXPECT_GT(std::abs(overlap_gaussian(wider, d1)), a); }
  }
}

}  // namespace
