#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fbmbt/rng.hpp"
#include "fbmbt/stats.hpp"

using namespace fbmbt;

namespace {

double kolmogorov_series(double lambda) {
  double s = 0.0;
  for (int k = 1; k <= 200; ++k) s += ((k % 2) ? 2.0 : -2.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return s;
}

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  RandomStream rng(make_seed(seed, 0, StreamTag::noise));
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST(Kolmogorov, SurvivalMatchesAlternatingSeries) {
  for (double lambda : {0.3, 0.5, 0.8, 1.0, 1.36, 1.63, 2.5}) {
    EXPECT_NEAR(kolmogorov_survival(lambda), kolmogorov_series(lambda), 1e-12) << lambda;
  }
  EXPECT_NEAR(kolmogorov_survival(1.358), 0.05, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(1.628), 0.01, 2e-4);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_LT(kolmogorov_survival(10.0), 1e-80);
}

TEST(KsTwoSample, Examples) {
  const std::vector<double> a{1, 2, 3, 4};
  const auto same = ks_two_sample(a, a);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  const std::vector<double> b{10, 11, 12};
  const auto apart = ks_two_sample(a, b);
  EXPECT_EQ(apart.statistic, 1.0);
  EXPECT_EQ(apart.size_a, 4u);
  EXPECT_EQ(apart.size_b, 3u);
  const std::vector<double> c{1.5, 2.5, 10};
  // ECDF gap peaks after 3 and 4: |3/4 - 2/3| and |1 - 2/3|.
  EXPECT_NEAR(ks_two_sample(a, c).statistic, 1.0 / 3.0, 1e-15);
  EXPECT_THROW(ks_two_sample(a, std::vector<double>{}), std::invalid_argument);
  EXPECT_EQ(ks_two_sample(std::vector<double>{0.0}, std::vector<double>{1.0}).statistic, 1.0);
}

TEST(KsTwoSample, PValueMeanNearHalfUnderNull) {
  double total = 0.0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) total += ks_two_sample(normals(2000, 9000 + 2 * i), normals(2000, 9001 + 2 * i)).p_value;
  EXPECT_NEAR(total / trials, 0.5, 0.1);
}

TEST(KsTwoSample, InvariantUnderMonotoneTransform) {
  auto a = normals(300, 1);
  auto b = normals(400, 2);
  for (auto& x : b) x = 0.2 + 1.1 * x;
  const auto r = ks_two_sample(a, b);
  for (auto& x : a) x = std::exp(x);
  for (auto& x : b) x = std::exp(x);
  const auto t = ks_two_sample(a, b);
  EXPECT_EQ(r.statistic, t.statistic);
  EXPECT_EQ(r.p_value, t.p_value);
}

TEST(KsTwoSample, PValueCalibratedUnderNull) {
  int rejections = 0;
  const int trials = 400;
  for (int i = 0; i < trials; ++i) {
    const auto a = normals(150, 100 + 2 * i);
    const auto b = normals(200, 101 + 2 * i);
    if (ks_two_sample(a, b).p_value < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / trials;
  EXPECT_GT(rate, 0.015);
  EXPECT_LT(rate, 0.09);
}

TEST(KsTwoSample, DetectsShift) {
  const auto a = normals(2000, 5);
  auto b = normals(2000, 6);
  for (auto& x : b) x += 0.2;
  EXPECT_LT(ks_two_sample(a, b).p_value, 1e-4);
}

TEST(KsOneSample, ExampleAgainstUniform) {
  const std::vector<double> s{0.9, 0.2, 0.4};
  const auto r = ks_one_sample(s, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_NEAR(r.statistic, 2.0 / 3.0 - 0.4, 1e-15);
}

TEST(KsOneSample, NormalNullAndAlternative) {
  const auto a = normals(5000, 9);
  EXPECT_GT(ks_normal(a, 0.0, 1.0).p_value, 1e-3);
  EXPECT_LT(ks_normal(a, 0.0, 1.5).p_value, 1e-6);
  EXPECT_THROW(ks_normal(a, 0.0, 0.0), std::invalid_argument);
  int rejections = 0;
  for (int i = 0; i < 300; ++i)
    if (ks_normal(normals(100, 1000 + i), 0.0, 1.0).p_value < 0.05) ++rejections;
  EXPECT_GT(rejections, 3);
  EXPECT_LT(rejections, 28);
}

TEST(SlopeFit, ExactPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (int n : {4, 6, 8, 10}) pts.emplace_back(n, std::exp2(-0.75 * n + 3.0));
  const auto fit = fit_log2_slope(pts);
  EXPECT_NEAR(fit.slope, -0.75, 1e-14);
  EXPECT_NEAR(fit.intercept, 3.0, 1e-13);
  EXPECT_NEAR(fit.std_error, 0.0, 1e-12);
}

TEST(SlopeFit, ConstantAndNoisy) {
  std::vector<std::pair<double, double>> flat{{4, 3.0}, {6, 3.0}, {8, 3.0}};
  EXPECT_NEAR(fit_log2_slope(flat).slope, 0.0, 1e-15);
  std::vector<std::pair<double, double>> exact{{1, 2.0}, {2, 4.0}, {3, 8.0}, {4, 16.0}};
  EXPECT_NEAR(fit_log2_slope(exact).slope, 1.0, 1e-12);
  EXPECT_NEAR(fit_log2_slope(exact).std_error, 0.0, 1e-12);
  RandomStream rng(make_seed(77, 0, StreamTag::noise));
  std::vector<std::pair<double, double>> noisy;
  for (int n = 4; n <= 16; n += 2) noisy.emplace_back(n, std::exp2(0.2 * n) * (1.0 + 0.01 * rng.normal()));
  EXPECT_NEAR(fit_log2_slope(noisy).slope, 0.2, 0.02);
}

TEST(SlopeFit, StandardErrorOfNoisyLine) {
  const std::vector<std::pair<double, double>> pts{{0, 1.0}, {1, 4.0}, {2, 4.0}};
  // log2 values 0, 2, 2: slope 1, residuals -1/3, 2/3, -1/3.
  const auto fit = fit_log2_slope(pts);
  EXPECT_NEAR(fit.slope, 1.0, 1e-14);
  EXPECT_NEAR(fit.std_error, std::sqrt((2.0 / 3.0) / 1.0 / 2.0), 1e-14);
}

TEST(SlopeFit, Errors) {
  const std::vector<std::pair<double, double>> two{{1, 1.0}, {2, 2.0}};
  EXPECT_THROW(fit_log2_slope(two), std::invalid_argument);
  const std::vector<std::pair<double, double>> neg{{1, 1.0}, {2, -2.0}, {3, 1.0}};
  EXPECT_THROW(fit_log2_slope(neg), std::invalid_argument);
  const std::vector<std::pair<double, double>> flat{{1, 1.0}, {1, 2.0}, {1, 3.0}};
  EXPECT_THROW(fit_log2_slope(flat), std::invalid_argument);
}

TEST(MeanInterval, Examples) {
  const std::vector<double> constant(50, 2.5);
  const auto c = mc_mean_ci(constant, 0.95);
  EXPECT_EQ(c.mean, 2.5);
  EXPECT_EQ(c.half_width, 0.0);
  std::vector<double> pm(400);
  for (std::size_t i = 0; i < pm.size(); ++i) pm[i] = (i % 2) ? 1.0 : -1.0;
  const auto p = mc_mean_ci(pm, 0.95);
  EXPECT_NEAR(p.mean, 0.0, 1e-15);
  EXPECT_NEAR(p.half_width, normal_quantile(0.975) * std::sqrt(400.0 / 399.0 / 400.0), 1e-12);
  EXPECT_THROW(mc_mean_ci(std::vector<double>{1.0}, 0.95), std::invalid_argument);
  EXPECT_THROW(mc_mean_ci(pm, 1.0), std::invalid_argument);
}

TEST(MeanInterval, Coverage) {
  int covered = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const auto s = normals(60, 5000 + i);
    const auto ci = mc_mean_ci(s, 0.95);
    if (std::abs(ci.mean) <= ci.half_width) ++covered;
  }
  EXPECT_NEAR(covered / static_cast<double>(trials), 0.95, 0.025);
}

TEST(Summary, Moments) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto s = summarize(v);
  EXPECT_EQ(s.count, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.variance, 2.5);
  EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(2.5 / 5));
  EXPECT_DOUBLE_EQ(s.p50, 3.0);
  EXPECT_DOUBLE_EQ(s.p10, 1.4);
  EXPECT_DOUBLE_EQ(s.p90, 4.6);
  EXPECT_THROW(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST(Quantile, Interpolation) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0 / 3.0), 2.0);
  EXPECT_THROW(quantile(v, 1.5), std::invalid_argument);
  EXPECT_THROW(quantile(std::vector<double>{}, 0.5), std::invalid_argument);
}
