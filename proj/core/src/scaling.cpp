#include "fbmbt/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fbmbt/errors.hpp"
#include "fbmbt/parallel.hpp"
#include "fbmbt/stats.hpp"
#include "fbmbt/summation.hpp"

namespace fbmbt {

double power_variation(const FbmPath& path, int power, int level, double t) {
  const double h = std::ldexp(1.0, -level);
  if (path.spacing() != h)
    throw std::invalid_argument("power_variation: path spacing " + std::to_string(path.spacing()) +
                                " does not equal 2^-" + std::to_string(level));
  if (power < 1) throw std::invalid_argument("power_variation: power must be positive");
  const auto steps = static_cast<std::int64_t>(std::floor(std::ldexp(t, level) + 1e-9));
  if (steps > path.half_extent()) throw ExtentError("power_variation: horizon exceeds the path extent", steps);
  CompensatedSum sum;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double d = path.at(k + 1) - path.at(k);
    double p = d;
    for (int i = 1; i < power; ++i) p *= d;
    sum += p;
  }
  return sum.value();
}

bool ScalingReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.required; });
}

namespace {

void validate(const ScalingConfig& c) {
  (void)HurstParameter(c.hurst);
  if (c.power != 2 && c.power != 3) throw std::invalid_argument("power must be 2 or 3");
  if (c.power == 3 && !(c.hurst < 0.5)) throw std::invalid_argument("the cubic check requires H < 1/2");
  if (!(c.t > 0.0)) throw std::invalid_argument("t must be positive");
  if (c.levels.empty()) throw std::invalid_argument("at least one level is required");
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    if (c.levels[i] < 1 || c.levels[i] > 24) throw std::invalid_argument("levels must lie in [1, 24]");
    if (i > 0 && c.levels[i] <= c.levels[i - 1]) throw std::invalid_argument("levels must be strictly increasing");
  }
  if (c.replicas < 2) throw std::invalid_argument("at least two replicas are required");
}

std::int64_t extent_for(int level, double t) {
  std::int64_t m = 1;
  while (static_cast<double>(m) < std::ldexp(t, level) + 1.0) m <<= 1;
  return m;
}

// values[k][i]: normalized statistic at level k, replica i. Each level draws
// its own paths.
std::vector<std::vector<double>> simulate(const ScalingConfig& c) {
  const HurstParameter h(c.hurst);
  const double exponent = c.power == 2 ? 2.0 * c.hurst - 1.0 : 3.0 * c.hurst - 0.5;
  std::vector<std::vector<double>> values(c.levels.size(), std::vector<double>(c.replicas));
  const unsigned threads = resolve_threads(c.threads);
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    const int n = c.levels[k];
    const FbmSampler sampler(h, std::ldexp(1.0, -n), extent_for(n, c.t));
    const double scale = std::exp2(n * exponent);
    parallel_for(c.replicas, threads, [&](std::size_t i) {
      const auto seed = make_seed(c.seed, i, StreamTag::fbm).with_substream(static_cast<std::uint32_t>(n));
      values[k][i] = scale * power_variation(sampler.sample(seed), c.power, n, c.t);
    });
  }
  return values;
}

ScalingReport make_report(const ScalingConfig& c) {
  ScalingReport r;
  r.hurst = c.hurst;
  r.power = c.power;
  r.t = c.t;
  r.levels = c.levels;
  r.replicas = c.replicas;
  r.seed = c.seed;
  return r;
}

ScalingLevel describe(int level, const std::vector<double>& v) {
  const SampleSummary s = summarize(v);
  ScalingLevel out;
  out.level = level;
  out.mean = s.mean;
  out.variance = s.variance;
  out.std_error = s.std_error;
  return out;
}

}  // namespace

ScalingReport check_quadratic(const ScalingConfig& config) {
  validate(config);
  if (config.power != 2) throw std::invalid_argument("check_quadratic requires power 2");
  const auto start = std::chrono::steady_clock::now();
  ScalingReport r = make_report(config);
  const auto values = simulate(config);
  for (std::size_t k = 0; k < config.levels.size(); ++k) {
    ScalingLevel s = describe(config.levels[k], values[k]);
    std::vector<double> err(values[k].size());
    std::transform(values[k].begin(), values[k].end(), err.begin(),
                   [&](double v) { return std::abs(v - config.t); });
    s.median_abs_error = quantile(err, 0.5);
    const KsResult ks = ks_normal(values[k], s.mean, std::max(s.variance, 1e-300));
    s.ks_statistic = ks.statistic;
    s.ks_p_value = ks.p_value;
    r.per_level.push_back(s);
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < r.per_level.size(); ++k)
    decreasing = decreasing && r.per_level[k].median_abs_error < r.per_level[k - 1].median_abs_error;
  r.checks.push_back({"median_abs_error_decreasing", decreasing ? 1.0 : 0.0, 1.0, decreasing, false});
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ScalingReport check_cubic(const ScalingConfig& config) {
  validate(config);
  if (config.power != 3) throw std::invalid_argument("check_cubic requires power 3");
  const auto start = std::chrono::steady_clock::now();
  ScalingReport r = make_report(config);
  const auto values = simulate(config);
  const SampleSummary top = summarize(values.back());
  r.estimated_sigma2 = top.variance / config.t;
  // Standard error of a sample variance from the fourth central moment.
  double m4 = 0.0;
  for (double v : values.back()) m4 += std::pow(v - top.mean, 4);
  m4 /= static_cast<double>(values.back().size());
  const double nrep = static_cast<double>(values.back().size());
  r.sigma2_std_error = std::sqrt(std::max(0.0, (m4 - top.variance * top.variance) / nrep)) / config.t;

  for (std::size_t k = 0; k < config.levels.size(); ++k) {
    ScalingLevel s = describe(config.levels[k], values[k]);
    s.median_abs_error = std::abs(s.mean);
    const KsResult ks = ks_normal(values[k], 0.0, r.estimated_sigma2 * config.t);
    s.ks_statistic = ks.statistic;
    s.ks_p_value = ks.p_value;
    r.per_level.push_back(s);
  }
  const ScalingLevel& last = r.per_level.back();
  r.checks.push_back({"ks_p_value_last", last.ks_p_value, 0.01, last.ks_p_value > 0.01, true});
  const double z = std::abs(last.mean) / last.std_error;
  r.checks.push_back({"mean_within_3_std_errors", z, 3.0, z <= 3.0, true});
  for (std::size_t k = 1; k < r.per_level.size(); ++k) {
    const double ratio = r.per_level[k].variance / r.per_level[k - 1].variance;
    r.checks.push_back({"variance_ratio_" + std::to_string(r.per_level[k].level), ratio, 1.25,
                        ratio >= 0.8 && ratio <= 1.25, false});
  }
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ScalingReport run_scaling(const ScalingConfig& config) {
  return config.power == 3 ? check_cubic(config) : check_quadratic(config);
}

}  // namespace fbmbt
