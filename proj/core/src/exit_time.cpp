// Exit time of standard Brownian motion from (-1, 1), started at 0.
//
// Two alternating series represent the law. The reflection (small-time)
// series converges fastest for t <= 1, the spectral (large-time) series for
// t > 1. Both are truncated once a term drops below 1e-12 of the partial sum.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fbmbt/skeleton.hpp"

namespace fbmbt {

namespace {

constexpr double kSeriesCutoff = 1e-12;
constexpr double kSwitchTime = 1.0;
constexpr int kMaxTerms = 200;

double small_time_cdf(double t) {
  double sum = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double a = 2.0 * k + 1.0;
    const double term = std::erfc(a / std::sqrt(2.0 * t));
    sum += (k % 2 == 0) ? term : -term;
    if (term <= kSeriesCutoff * std::abs(sum)) break;
  }
  return 2.0 * sum;
}

double small_time_density(double t) {
  double sum = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double a = 2.0 * k + 1.0;
    const double term = a * std::exp(-a * a / (2.0 * t));
    sum += (k % 2 == 0) ? term : -term;
    if (term <= kSeriesCutoff * std::abs(sum)) break;
  }
  return 2.0 * sum / std::sqrt(2.0 * std::numbers::pi * t * t * t);
}

double large_time_survival(double t) {
  constexpr double c = std::numbers::pi * std::numbers::pi / 8.0;
  double sum = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double a = 2.0 * k + 1.0;
    const double term = std::exp(-a * a * c * t) / a;
    sum += (k % 2 == 0) ? term : -term;
    if (term <= kSeriesCutoff * std::abs(sum)) break;
  }
  return 4.0 / std::numbers::pi * sum;
}

double large_time_density(double t) {
  constexpr double c = std::numbers::pi * std::numbers::pi / 8.0;
  double sum = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double a = 2.0 * k + 1.0;
    const double term = a * std::exp(-a * a * c * t);
    sum += (k % 2 == 0) ? term : -term;
    if (term <= kSeriesCutoff * std::abs(sum)) break;
  }
  return std::numbers::pi / 2.0 * sum;
}

}  // namespace

double exit_time_cdf(double t) {
  if (t <= 0.0) return 0.0;
  return t <= kSwitchTime ? small_time_cdf(t) : 1.0 - large_time_survival(t);
}

double exit_time_survival(double t) {
  if (t <= 0.0) return 1.0;
  return t <= kSwitchTime ? 1.0 - small_time_cdf(t) : large_time_survival(t);
}

double exit_time_density(double t) {
  if (t <= 0.0) return 0.0;
  return t <= kSwitchTime ? small_time_density(t) : large_time_density(t);
}

double exit_time_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("exit_time_quantile: u must lie in (0, 1)");

  // Newton on log F (lower half) or log S (upper half), started from the
  // one-term asymptotics and safeguarded by bisection on a shrinking bracket.
  const bool lower = u <= 0.5;
  double t;
  if (lower) {
    const double z = -normal_quantile(u / 4.0);
    t = 1.0 / (z * z);
  } else {
    t = 8.0 / (std::numbers::pi * std::numbers::pi) * std::log(4.0 / std::numbers::pi / (1.0 - u));
  }
  const double target = lower ? std::log(u) : std::log1p(-u);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < 100; ++iter) {
    double g;
    double slope;
    if (lower) {
      const double f = exit_time_cdf(t);
      g = std::log(f) - target;
      slope = exit_time_density(t) / f;
    } else {
      const double s = exit_time_survival(t);
      g = -(std::log(s) - target);  // oriented so g increases with t
      slope = exit_time_density(t) / s;
    }
    if (g > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    double next = t - g / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * t;
    }
    if (std::abs(next - t) <= 1e-14 * t) return next;
    t = next;
  }
  return t;
}

double sample_exit_time(RandomStream& rng) { return exit_time_quantile(rng.uniform()); }

}  // namespace fbmbt
