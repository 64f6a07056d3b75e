#include "fbmbt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fbmbt/rng.hpp"
#include "fbmbt/summation.hpp"

namespace fbmbt {

double quantile(std::span<const double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SampleSummary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
  SampleSummary s;
  s.count = samples.size();
  CompensatedSum sum;
  for (double v : samples) sum += v;
  s.mean = sum.value() / static_cast<double>(s.count);
  if (s.count > 1) {
    CompensatedSum ss;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.variance = std::max(0.0, ss.value() / static_cast<double>(s.count - 1));
  }
  s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.p10 = at(0.1);
  s.p50 = at(0.5);
  s.p90 = at(0.9);
  return s;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series for the CDF converges fast for small lambda.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    double term = y;
    for (int k = 1; k <= 50; ++k) {
      const double e = static_cast<double>((2 * k - 1) * (2 * k - 1));
      term = std::pow(y, e);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double statistic, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * statistic);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: both samples must be non-empty");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.statistic = d;
  r.size_a = x.size();
  r.size_b = y.size();
  r.p_value = ks_p_value(d, n * m / (n + m));
  return r;
}

KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  KsResult r;
  r.statistic = std::clamp(d, 0.0, 1.0);
  r.size_a = x.size();
  r.p_value = ks_p_value(r.statistic, n);
  return r;
}

KsResult ks_normal(std::span<const double> samples, double mean, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("ks_normal: variance must be positive");
  const double sd = std::sqrt(variance);
  return ks_one_sample(samples, [=](double v) { return normal_cdf((v - mean) / sd); });
}

SlopeFit fit_log2_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_log2_slope: need at least three points");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, v] : points) {
    if (!(v > 0.0)) throw std::invalid_argument("fit_log2_slope: values must be positive");
    xs.push_back(n);
    ys.push_back(std::log2(v));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_log2_slope: levels must not all coincide");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += res * res;
  }
  fit.std_error = std::sqrt(std::max(0.0, ssr / (k - 2.0) / sxx));
  return fit;
}

MeanInterval mc_mean_ci(std::span<const double> samples, double confidence) {
  if (samples.size() < 2) throw std::invalid_argument("mc_mean_ci: need at least two samples");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("mc_mean_ci: confidence must lie in (0,1)");
  const auto s = summarize(samples);
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  return {s.mean, z * s.std_error};
}

}  // namespace fbmbt
