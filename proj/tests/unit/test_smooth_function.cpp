#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fbmbt/smooth_function.hpp"

using namespace fbmbt;

namespace {

// Five-point central difference of f^{(k)}.
double central_difference(const SmoothFunction& f, int k, double x, double h) {
  auto g = [&](double y) { return f.derivative(k, y); };
  return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST(SmoothFunction, DerivativesMatchFiniteDifferences) {
  const SmoothFunction fns[] = {
      SmoothFunction::sine(),
      SmoothFunction::cosine(),
      SmoothFunction::gaussian_bump(),
      SmoothFunction::constant(1.0),
      SmoothFunction::polynomial({0.3, -1.0, 0.5, 0.25, -0.1, 0.02}),
  };
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& f : fns) {
    for (int i = 0; i < 100; ++i) {
      const double x = u(gen);
      for (int k = 0; k < 13; ++k) {
        const double fd = central_difference(f, k, x, 1e-3);
        const double exact = f.derivative(k + 1, x);
        const double scale = std::max({1.0, std::abs(exact), std::abs(f.derivative(k, x))});
        ASSERT_NEAR(exact, fd, 1e-6 * scale) << f.descriptor() << " order " << k + 1 << " at " << x;
      }
    }
  }
}

TEST(SmoothFunction, OrderZeroIsTheFunction) {
  const auto f = SmoothFunction::sine();
  EXPECT_EQ(f.derivative(0, 0.7), std::sin(0.7));
  EXPECT_EQ(f(0.7), std::sin(0.7));
  const auto g = SmoothFunction::gaussian_bump();
  EXPECT_DOUBLE_EQ(g(1.2), std::exp(-0.72));
}

TEST(SmoothFunction, KnownDerivatives) {
  EXPECT_DOUBLE_EQ(SmoothFunction::sine().derivative(3, 0.4), -std::cos(0.4));
  EXPECT_DOUBLE_EQ(SmoothFunction::cosine().derivative(5, 0.4), -std::sin(0.4));
  EXPECT_DOUBLE_EQ(SmoothFunction::gaussian_bump().derivative(2, 0.0), -1.0);
  const auto cube = SmoothFunction::polynomial({0.0, 0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(cube.derivative(1, 2.0), 12.0);
  EXPECT_DOUBLE_EQ(cube.derivative(3, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(cube.derivative(4, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(SmoothFunction::constant(2.5).derivative(1, 1.0), 0.0);
}

TEST(SmoothFunction, DerivativeFunctionShiftsOrder) {
  const auto f = SmoothFunction::sine();
  const auto f3 = f.derivative_function(3);
  for (double x : {-1.0, 0.2, 2.0}) {
    EXPECT_EQ(f3(x), f.derivative(3, x));
    EXPECT_EQ(f3.derivative(2, x), f.derivative(5, x));
  }
  EXPECT_EQ(f3.max_order(), f.max_order() - 3);
}

TEST(SmoothFunction, OrderOutOfRange) {
  const auto f = SmoothFunction::sine();
  EXPECT_THROW((void)f.derivative(-1, 0.0), std::out_of_range);
  EXPECT_THROW((void)f.derivative(SmoothFunction::kMaxOrder + 1, 0.0), std::out_of_range);
  EXPECT_THROW((void)f.derivative_function(SmoothFunction::kMaxOrder + 1), std::out_of_range);
}

TEST(SmoothFunction, Parse) {
  EXPECT_EQ(SmoothFunction::parse("sin").descriptor(), "sin");
  EXPECT_EQ(SmoothFunction::parse("one")(3.0), 1.0);
  EXPECT_EQ(SmoothFunction::parse("x2")(3.0), 9.0);
  EXPECT_EQ(SmoothFunction::parse("x3")(2.0), 8.0);
  EXPECT_EQ(SmoothFunction::parse("const:2.5")(0.1), 2.5);
  EXPECT_DOUBLE_EQ(SmoothFunction::parse("poly:1,2,3")(2.0), 17.0);
  EXPECT_DOUBLE_EQ(SmoothFunction::parse("bump")(0.0), 1.0);
  EXPECT_THROW(SmoothFunction::parse("tan"), std::invalid_argument);
  EXPECT_THROW(SmoothFunction::parse("poly:"), std::invalid_argument);
}
