#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fbmbt/calculus.hpp"
#include "fbmbt/errors.hpp"
#include "fbmbt/stats.hpp"
#include "fbmbt/variations.hpp"
#include "oracles.hpp"

using namespace fbmbt;

TEST(Hermite, Examples) {
  EXPECT_DOUBLE_EQ(hermite(3, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite(1, 0.37), 0.37);
  EXPECT_DOUBLE_EQ(hermite(0, 5.0), 1.0);
  const double x = 1.3;
  EXPECT_NEAR(hermite(5, x), std::pow(x, 5) - 10 * std::pow(x, 3) + 15 * x, 1e-13);
}

TEST(Hermite, RecurrenceMatchesExplicitSum) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int p = 0; p <= kMaxHermiteDegree; ++p) {
    const auto coeffs = hermite_monomial_coeffs(p);
    for (int i = 0; i < 50; ++i) {
      const double x = u(gen);
      double mass = 0.0;
      for (std::size_t k = 0; k < coeffs.size(); ++k) mass += std::abs(static_cast<double>(coeffs[k])) * std::pow(std::abs(x), k);
      EXPECT_NEAR(hermite(p, x), oracle::hermite_explicit(p, x), 1e-10 * mass) << p << " " << x;
    }
  }
  EXPECT_THROW(hermite(14, 0.0), std::out_of_range);
  EXPECT_THROW(hermite(-1, 0.0), std::out_of_range);
}

TEST(Hermite, MonomialCoefficients) {
  EXPECT_EQ(hermite_monomial_coeffs(3), (std::vector<std::int64_t>{0, -3, 0, 1}));
  EXPECT_EQ(hermite_monomial_coeffs(4), (std::vector<std::int64_t>{3, 0, -6, 0, 1}));
  for (int p = 0; p <= kMaxHermiteDegree; ++p) {
    const auto c = hermite_monomial_coeffs(p);
    for (double x : {-1.1, 0.6, 2.3}) {
      double v = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) v = v * x + static_cast<double>(c[k]);
      EXPECT_NEAR(v, oracle::hermite_explicit(p, x), 1e-9 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST(OddPowerHermite, Examples) {
  EXPECT_EQ(odd_power_hermite_coeffs_exact(1), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(odd_power_hermite_coeffs_exact(2), (std::vector<std::int64_t>{3, 1}));
  EXPECT_EQ(odd_power_hermite_coeffs(2), (std::vector<double>{3.0, 1.0}));
  EXPECT_THROW(odd_power_hermite_coeffs(0), std::out_of_range);
  EXPECT_THROW(odd_power_hermite_coeffs(8), std::out_of_range);
}

TEST(OddPowerHermite, ClosedForm) {
  for (int r = 1; r <= 7; ++r) {
    const auto a = odd_power_hermite_coeffs_exact(r);
    ASSERT_EQ(a.size(), static_cast<std::size_t>(r));
    EXPECT_EQ(a.back(), 1);
    for (int l = 1; l <= r; ++l) EXPECT_EQ(a[l - 1], oracle::odd_power_coefficient(r, l)) << r << "," << l;
  }
}

TEST(SymmetricVariationDirect, Telescoping) {
  const std::vector<double> z{0.0, 0.4, -0.3, 0.9, 1.2, 0.5};
  EXPECT_NEAR(symmetric_variation_direct(SmoothFunction::constant(1.0), z, 1), 0.5, 1e-15);
  const auto two_x = SmoothFunction::polynomial({0.0, 2.0});
  EXPECT_NEAR(symmetric_variation_direct(two_x, z, 1), 0.25, 1e-15);
}

TEST(SymmetricVariationDirect, BruteForce) {
  const std::vector<double> z{0.1, -0.2, 0.3, 0.25};
  const auto f = SmoothFunction::cosine();
  double ref = 0.0;
  for (std::size_t k = 0; k + 1 < z.size(); ++k)
    ref += 0.5 * (std::cos(z[k]) + std::cos(z[k + 1])) * std::pow(z[k + 1] - z[k], 5);
  EXPECT_NEAR(symmetric_variation_direct(f, z, 5), ref, 1e-16);
}

TEST(SymmetricVariationDirect, RejectsBadInput) {
  const auto f = SmoothFunction::sine();
  EXPECT_THROW(symmetric_variation_direct(f, std::vector<double>{0.0}, 1), std::invalid_argument);
  EXPECT_THROW(symmetric_variation_direct(f, std::vector<double>{0.0, 1.0}, 2), std::invalid_argument);
  EXPECT_THROW(symmetric_variation_direct(f, std::vector<double>{0.0, 1.0}, 0), std::invalid_argument);
}

namespace {

FbmPath toy_path(double hurst, int level, std::int64_t reach, std::uint64_t seed) {
  return sample_fbm_two_sided(HurstParameter(hurst), std::exp2(-0.5 * level), reach, make_seed(seed, 0, StreamTag::fbm));
}

}  // namespace

TEST(SymmetricVariationSkeletal, ZeroTerminal) {
  const FbmPath x = toy_path(0.3, 4, 16, 1);
  const std::vector<std::int32_t> walk{0, 1, 2, 1, 0, -1, 0};
  const auto c = crossing_counts(walk, 6, 4);
  EXPECT_EQ(symmetric_variation_skeletal(SmoothFunction::sine(), x, c, 3), 0.0);
}

TEST(SymmetricVariationSkeletal, ConstantWeightTelescopes) {
  const FbmPath x = toy_path(0.3, 4, 16, 2);
  const std::vector<std::int32_t> walk{0, -1, -2, -3, -2, -3};
  const auto c = crossing_counts(walk, 5, 4);
  EXPECT_NEAR(symmetric_variation_skeletal(SmoothFunction::constant(1.0), x, c, 1), x.at(-3), 1e-15);
}

TEST(SymmetricVariationSkeletal, MatchesDirectOnRandomWalks) {
  const FbmPath x = toy_path(0.25, 6, 200, 3);
  for (std::uint64_t r = 0; r < 100; ++r) {
    const std::size_t steps = 200;
    const auto walk = sample_walk_positions(steps, make_seed(4, r, StreamTag::walk));
    SkeletalStructure sk;
    sk.level = 6;
    sk.walk = walk;
    sk.times.resize(walk.size());
    for (std::size_t k = 0; k < walk.size(); ++k) sk.times[k] = static_cast<double>(k);
    const auto z = skeletal_z_values(x, sk, steps);
    const auto c = crossing_counts(walk, steps, 6);
    for (int order : {1, 3, 5}) {
      const auto f = SmoothFunction::sine();
      const double direct = symmetric_variation_direct(f, z, order);
      const double skel = symmetric_variation_skeletal(f, x, c, order);
      EXPECT_NEAR(direct, skel, 1e-9 * std::max(std::abs(direct), 1e-300) + 1e-15);
    }
  }
}

TEST(SymmetricVariationSkeletal, ExtentChecked) {
  const FbmPath x = toy_path(0.3, 4, 4, 5);
  const std::vector<std::int32_t> walk{0, 1, 2, 3, 4, 5, 6};
  const auto c = crossing_counts(walk, 6, 4);
  EXPECT_THROW((void)symmetric_variation_skeletal(SmoothFunction::sine(), x, c, 1), ExtentError);
}

TEST(LevelGrid, StrideFromSpacing) {
  const FbmPath x = sample_fbm_two_sided(HurstParameter(0.3), std::exp2(-4.0) / 4, 64, make_seed(1, 0, StreamTag::fbm));
  const LevelGrid g(x, 8);
  EXPECT_EQ(g.stride(), 4);
  EXPECT_EQ(g.reach(), 16);
  EXPECT_EQ(g[3], x.at(12));
  EXPECT_EQ(g[-2], x.at(-8));
  EXPECT_THROW(LevelGrid(x, 7), std::invalid_argument);
  EXPECT_THROW(LevelGrid(x, 14), std::invalid_argument);
}

TEST(RescaledIncrement, OriginAndUnitVariance) {
  const int n = 8;
  const double h = 0.3;
  const FbmSampler sampler(HurstParameter(h), std::exp2(-0.5 * n), 32);
  const int replicas = 10000;
  std::vector<double> g0(replicas), g5m(replicas);
  std::vector<std::vector<double>> lag(4, std::vector<double>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const FbmPath x = sampler.sample(make_seed(7, static_cast<std::uint64_t>(r), StreamTag::fbm));
    if (r == 0) EXPECT_DOUBLE_EQ(rescaled_increment(x, n, 0, Side::plus), std::exp2(0.5 * n * h) * x.at(1));
    g0[r] = rescaled_increment(x, n, 0, Side::plus);
    g5m[r] = rescaled_increment(x, n, 5, Side::minus);
    for (int q = 0; q < 4; ++q) lag[q][r] = rescaled_increment(x, n, 10 + q, Side::plus);
  }
  const double se = std::sqrt(2.0 / replicas);
  EXPECT_NEAR(summarize(g0).variance, 1.0, 3.0 * se);
  EXPECT_NEAR(summarize(g5m).variance, 1.0, 3.0 * se);
  for (int q = 1; q < 4; ++q) {
    double c = 0.0;
    for (int r = 0; r < replicas; ++r) c += lag[0][r] * lag[q][r];
    c /= replicas;
    const double rho = increment_autocovariance(q, HurstParameter(h));
    EXPECT_NEAR(c, rho, 4.0 * std::sqrt((1.0 + rho * rho) / replicas)) << q;
  }
  EXPECT_THROW((void)rescaled_increment(sampler.sample(make_seed(7, 0, StreamTag::fbm)), n, 40, Side::plus), ExtentError);
}

TEST(WeightedHermiteVariation, EmptyAndTelescoping) {
  const int n = 6;
  const double h = 0.3;
  const FbmPath x = toy_path(h, n, 64, 9);
  const auto one = SmoothFunction::constant(1.0);
  EXPECT_EQ(weighted_hermite_variation(SmoothFunction::sine(), x, n, 3, 0.1), 0.0);
  const double t = 1.3;  // floor(8 * 1.3) = 10 grid steps
  EXPECT_NEAR(weighted_hermite_variation(one, x, n, 1, t), std::exp2(0.5 * n * h) * x.at(10), 1e-13);
  EXPECT_NEAR(weighted_hermite_variation(one, x, n, 1, -t), std::exp2(0.5 * n * h) * x.at(-10), 1e-13);
  EXPECT_THROW((void)weighted_hermite_variation(one, x, n, 1, 9.0), ExtentError);
}

TEST(WeightedHermiteVariation, BruteForceNegativeSide) {
  const int n = 4;
  const double h = 0.2;
  const FbmPath x = toy_path(h, n, 32, 10);
  const auto f = SmoothFunction::cosine();
  const double scale = std::exp2(0.5 * n * h);
  double ref = 0.0;
  for (int j = 0; j < 6; ++j) {
    const double a = x.at(-j);
    const double b = x.at(-(j + 1));
    ref += 0.5 * (std::cos(a) + std::cos(b)) * oracle::hermite_explicit(3, scale * (b - a));
  }
  EXPECT_NEAR(weighted_hermite_variation(f, x, n, 3, -1.5), ref, 1e-12);
}

TEST(WeightedHermiteVariation, ProfileMatchesPointEvaluations) {
  const int n = 6;
  const FbmPath x = toy_path(0.3, n, 64, 11);
  const auto f = SmoothFunction::gaussian_bump();
  const auto prof = hermite_variation_profile(f, x, n, 3, 40);
  for (double t : {0.0, 0.3, 1.0, -2.2, 4.9}) {
    EXPECT_NEAR(prof.at(t), weighted_hermite_variation(f, x, n, 3, t), 1e-12) << t;
  }
}

TEST(WeightedHermiteVariation, DecompositionOfOddVariation) {
  for (double h : {0.1, 0.3, 0.6}) {
    for (int n : {4, 6, 8}) {
      const int levels[] = {n};
      const JointSampler sampler(JointSampleSpec::for_levels(HurstParameter(h), 1.0, levels, 1, false));
      for (std::uint64_t r = 0; r < 10; ++r) {
        const JointSample js = sampler.sample(13, r);
        const auto c = crossing_counts(js.skeleton, 1.0);
        const double y_end = c.terminal * std::exp2(-0.5 * n);
        const auto f = SmoothFunction::sine();
        for (int rr = 1; rr <= 4; ++rr) {
          const auto a = odd_power_hermite_coeffs(rr);
          const double scale = std::exp2(-n * h * (rr - 0.5));
          double rhs = 0.0;
          double mass = 0.0;
          for (int l = 1; l <= rr; ++l) {
            const double term = scale * a[l - 1] * weighted_hermite_variation(f, *js.x, n, 2 * l - 1, y_end);
            rhs += term;
            mass += std::abs(term);
          }
          const double lhs = symmetric_variation_skeletal(f, *js.x, c, 2 * rr - 1);
          EXPECT_NEAR(lhs, rhs, 1e-10 * mass + 1e-15) << "H=" << h << " n=" << n << " r=" << rr;
        }
      }
    }
  }
}

TEST(LevelSteps, SnapsNearIntegers) {
  EXPECT_EQ(level_steps(4, 1.0), 4);
  EXPECT_EQ(level_steps(4, 0.9999999999999), 4);
  EXPECT_EQ(level_steps(4, 0.99), 3);
  EXPECT_EQ(level_steps(5, -1.0), 5);
}

TEST(VariationSeries, CsvRows) {
  std::ostringstream os;
  write_variation_csv_header(os);
  VariationSeries row;
  row.order = 3;
  row.level = 8;
  row.horizon = 1.0;
  row.mode = VariationSeries::Mode::skeletal;
  row.value = 0.25;
  row.seed = make_seed(1, 2, StreamTag::fbm);
  write_variation_csv_row(os, row);
  EXPECT_EQ(os.str(), "order,level,horizon,mode,value,seed\n3,8,1,skeletal,0.25,1:2:1:0\n");
}
