#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fbmbt {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double p10 = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double std_error = 0.0;
};

/// Throws std::invalid_argument on empty input.
SampleSummary summarize(std::span<const double> samples);

/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::span<const double> samples, double q);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov test. Asymptotic p-value with the
/// effective-size correction (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);

KsResult ks_normal(std::span<const double> samples, double mean, double variance);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log2(v) against n for points (n, v), v > 0.
SlopeFit fit_log2_slope(std::span<const std::pair<double, double>> points);

struct MeanInterval {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Normal-approximation interval: half width = z_{(1+c)/2} * stderr.
MeanInterval mc_mean_ci(std::span<const double> samples, double confidence);

}  // namespace fbmbt
