#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "fbmbt/calculus.hpp"
#include "fbmbt/skeleton.hpp"
#include "fbmbt/variations.hpp"

namespace fbmbt::cli {

namespace {

constexpr std::uint64_t kSeed = 20240611;

bool close_rel(double a, double b, double rel) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * scale || std::abs(a - b) <= 1e-14;
}

std::vector<JointSample> joint_samples(double hurst, int level, std::size_t count) {
  const int levels[] = {level};
  const JointSampler sampler(JointSampleSpec::for_levels(HurstParameter(hurst), 1.0, levels, 1, false));
  std::vector<JointSample> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.sample(kSeed + static_cast<std::uint64_t>(level), i));
  return out;
}

bool suite_direct_vs_skeletal() {
  const auto f = SmoothFunction::sine();
  for (int n = 4; n <= 10; n += 2) {
    for (const auto& js : joint_samples(0.3, n, 5)) {
      const std::size_t steps = steps_for_horizon(n, 1.0);
      const auto z = skeletal_z_values(*js.x, js.skeleton, steps);
      const auto counts = crossing_counts(js.skeleton, 1.0);
      for (int r = 1; r <= 3; ++r) {
        const double direct = symmetric_variation_direct(f, z, 2 * r - 1);
        const double skeletal = symmetric_variation_skeletal(f, *js.x, counts, 2 * r - 1);
        if (!close_rel(direct, skeletal, 1e-9)) return false;
      }
    }
  }
  return true;
}

bool suite_hermite_decomposition() {
  const auto f = SmoothFunction::cosine();
  const double hurst = 0.3;
  for (int n = 4; n <= 10; n += 2) {
    for (const auto& js : joint_samples(hurst, n, 5)) {
      const auto counts = crossing_counts(js.skeleton, 1.0);
      const double y_end = counts.terminal * std::exp2(-0.5 * n);
      for (int r = 1; r <= 3; ++r) {
        const auto a = odd_power_hermite_coeffs(r);
        double rhs = 0.0;
        for (int l = 1; l <= r; ++l)
          rhs += a[static_cast<std::size_t>(l - 1)] * weighted_hermite_variation(f, *js.x, n, 2 * l - 1, y_end);
        rhs *= std::exp2(-n * hurst * (r - 0.5));
        const double lhs = symmetric_variation_skeletal(f, *js.x, counts, 2 * r - 1);
        if (!close_rel(lhs, rhs, 1e-9)) return false;
      }
    }
  }
  return true;
}

bool suite_taylor_exactness() {
  const TaylorScheme& s = taylor_coefficients();
  if (s.exact[0] != std::pair<std::int64_t, std::int64_t>{1, 2}) return false;
  if (s.exact[1] != std::pair<std::int64_t, std::int64_t>{-1, 24}) return false;
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k <= 13; ++k) {
    std::vector<double> coeffs(static_cast<std::size_t>(k) + 1, 0.0);
    coeffs.back() = 1.0;
    const auto f = SmoothFunction::polynomial(coeffs);
    for (int i = 0; i < 20; ++i) {
      const double a = u(gen);
      const double b = u(gen);
      const double err = std::abs(s.apply(f, a, b) - (f(b) - f(a)));
      if (err > 1e-10 * std::pow(std::max(1.0, std::abs(b - a)), 13)) return false;
    }
  }
  return true;
}

bool suite_telescoping() {
  const auto id = SmoothFunction::polynomial({0.0, 1.0});
  const auto sq = SmoothFunction::polynomial({0.0, 0.0, 1.0});
  for (const auto& js : joint_samples(0.35, 8, 5)) {
    const std::size_t steps = steps_for_horizon(js.level, 1.0);
    const double z_end = skeletal_z_values(*js.x, js.skeleton, steps).back();
    const double z_t = evaluate_z(*js.x, js.y->value_at(1.0));
    if (std::abs(ito_residual(id, js, 1.0) - (z_t - z_end)) > 1e-12) return false;
    if (std::abs(ito_residual(sq, js, 1.0) - (z_t * z_t - z_end * z_end)) > 1e-12) return false;
  }
  return true;
}

bool suite_crossing_counts() {
  for (int len = 0; len <= 10; ++len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      std::vector<std::int32_t> walk{0};
      for (int k = 0; k < len; ++k) walk.push_back(walk.back() + (((bits >> k) & 1u) ? 1 : -1));
      const auto c = crossing_counts(walk, static_cast<std::size_t>(len), 2);
      std::int64_t net = 0;
      for (std::int32_t j = -len - 1; j <= len; ++j) {
        const std::int64_t d = c.up_at(j) - c.down_at(j);
        if (d != updown_difference(c.terminal, j)) return false;
        net += d;
      }
      if (net != walk.back()) return false;
    }
  }
  return true;
}

bool suite_odd_power_coefficients() {
  for (int r = 1; r <= 7; ++r) {
    const auto a = odd_power_hermite_coeffs(r);
    for (double x : {-1.7, -0.3, 0.4, 2.2}) {
      double sum = 0.0;
      double mass = 0.0;
      for (int l = 1; l <= r; ++l) {
        const double term = a[static_cast<std::size_t>(l - 1)] * hermite(2 * l - 1, x);
        sum += term;
        mass += std::abs(term);
      }
      if (std::abs(sum - std::pow(x, 2 * r - 1)) > 1e-13 * mass) return false;
    }
  }
  return true;
}

}  // namespace

bool selftest(std::ostream& out) {
  const std::pair<const char*, std::function<bool()>> suites[] = {
      {"direct vs skeletal variation", suite_direct_vs_skeletal},
      {"Hermite decomposition of odd variations", suite_hermite_decomposition},
      {"symmetric Taylor scheme exactness", suite_taylor_exactness},
      {"telescoping residuals", suite_telescoping},
      {"crossing-count conservation", suite_crossing_counts},
      {"odd powers in the Hermite basis", suite_odd_power_coefficients},
  };
  bool all = true;
  for (const auto& [name, fn] : suites) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "  error in " << name << ": " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    all = all && ok;
  }
  out << (all ? "selftest passed" : "selftest FAILED") << '\n';
  return all;
}

}  // namespace fbmbt::cli
