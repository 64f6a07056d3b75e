#include "fbmbt/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fbmbt/parallel.hpp"
#include "fbmbt/stats.hpp"
#include "fbmbt/variations.hpp"

namespace fbmbt {

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::supercritical:
      return "supercritical";
    case Branch::critical:
      return "critical";
    case Branch::subcritical:
      return "subcritical";
  }
  return "?";
}

Branch parse_branch(const std::string& text) {
  if (text == "supercritical" || text == "1") return Branch::supercritical;
  if (text == "critical" || text == "2") return Branch::critical;
  if (text == "subcritical" || text == "3") return Branch::subcritical;
  throw std::invalid_argument("unknown branch '" + text + "' (expected supercritical, critical or subcritical)");
}

const char* to_string(WalkSource source) { return source == WalkSource::path ? "path" : "exact"; }

WalkSource parse_walk_source(const std::string& text) {
  if (text == "path") return WalkSource::path;
  if (text == "exact") return WalkSource::exact;
  throw std::invalid_argument("unknown walk source '" + text + "' (expected path or exact)");
}

void validate(const VerifyConfig& config) {
  const HurstParameter h(config.hurst);
  switch (config.branch) {
    case Branch::supercritical:
      if (h.regime() != HurstParameter::Regime::supercritical)
        throw std::invalid_argument("branch supercritical requires H > 1/6, got " + std::to_string(h.value()));
      break;
    case Branch::critical:
      if (h.regime() != HurstParameter::Regime::critical)
        throw std::invalid_argument("H must equal 1/6 for branch critical, got " + std::to_string(h.value()));
      break;
    case Branch::subcritical:
      if (h.regime() != HurstParameter::Regime::subcritical)
        throw std::invalid_argument("branch subcritical requires H < 1/6, got " + std::to_string(h.value()));
      break;
  }
  if (config.levels.size() < 2) throw std::invalid_argument("at least two levels are required");
  if (config.branch == Branch::subcritical && config.levels.size() < 3)
    throw std::invalid_argument("the slope fit needs at least three levels");
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (config.levels[i] < 1 || config.levels[i] > 24) throw std::invalid_argument("levels must lie in [1, 24]");
    if (i > 0 && config.levels[i] <= config.levels[i - 1])
      throw std::invalid_argument("levels must be strictly increasing");
  }
  if (config.replicas < 2) throw std::invalid_argument("at least two replicas are required");
  if (!(config.t > 0.0)) throw std::invalid_argument("t must be positive");
  if (config.oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  (void)SmoothFunction::parse(config.function);
}

bool VerificationReport::passed() const { return first_failure() == nullptr; }

const Check* VerificationReport::first_failure() const {
  for (const auto& c : checks)
    if (c.required && !c.passed) return &c;
  return nullptr;
}

namespace {

using Table = std::vector<std::vector<double>>;  // [level][replica]

LevelStatistics describe(int level, const std::vector<double>& values) {
  std::vector<double> abs_values(values.size());
  std::transform(values.begin(), values.end(), abs_values.begin(), [](double v) { return std::abs(v); });
  const SampleSummary raw = summarize(values);
  const SampleSummary abs = summarize(abs_values);
  LevelStatistics s;
  s.level = level;
  s.mean = raw.mean;
  s.variance = raw.variance;
  s.mean_abs = abs.mean;
  s.p90 = abs.p90;
  s.std_error = abs.std_error;
  s.ks_distance = std::numeric_limits<double>::quiet_NaN();
  s.ks_p_value = std::numeric_limits<double>::quiet_NaN();
  return s;
}

Table make_table(const VerifyConfig& c) {
  return Table(c.levels.size(), std::vector<double>(c.replicas));
}

JointSampleSpec spec_for(const VerifyConfig& c, bool with_noise) {
  auto spec = JointSampleSpec::for_levels(HurstParameter(c.hurst), c.t, c.levels, c.oversample, with_noise);
  spec.mode = c.mode;
  return spec;
}

void supercritical(const VerifyConfig& c, VerificationReport& r, unsigned threads) {
  const auto f = SmoothFunction::parse(c.function);
  const JointSampler sampler(spec_for(c, false));
  Table table = make_table(c);
  parallel_for(c.replicas, threads, [&](std::size_t i) {
    const JointSample base = sampler.sample(c.seed, i);
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
      const int n = c.levels[k];
      const JointSample js = n == base.level ? base : base.at_level(n);
      table[k][i] = ito_residual(f, js, c.t);
    }
  });
  for (std::size_t k = 0; k < c.levels.size(); ++k) r.per_level.push_back(describe(c.levels[k], table[k]));

  bool decreasing = true;
  bool p90_decreasing = true;
  for (std::size_t k = 1; k < r.per_level.size(); ++k) {
    decreasing = decreasing && r.per_level[k].mean_abs < r.per_level[k - 1].mean_abs;
    p90_decreasing = p90_decreasing && r.per_level[k].p90 < r.per_level[k - 1].p90;
  }
  const double ratio = r.per_level.back().mean_abs / r.per_level.front().mean_abs;
  r.checks.push_back({"mean_abs_strictly_decreasing", decreasing ? 1.0 : 0.0, 1.0, decreasing, true});
  r.checks.push_back({"mean_abs_ratio_last_first", ratio, c.max_mean_ratio, ratio <= c.max_mean_ratio, true});
  r.checks.push_back({"p90_strictly_decreasing", p90_decreasing ? 1.0 : 0.0, 1.0, p90_decreasing, false});
}

// Pool A replicas are drawn from a disjoint replica range so the two pools
// are independent.
constexpr std::uint64_t kPoolOffset = std::uint64_t{1} << 40;

void critical(const VerifyConfig& c, VerificationReport& r, unsigned threads) {
  const auto f = SmoothFunction::parse(c.function);
  const auto fp = f.derivative_function(1);
  const JointSampleSpec spec = spec_for(c, true);
  const JointSampler sampler(spec);

  std::vector<double> lhs(c.replicas);
  parallel_for(c.replicas, threads, [&](std::size_t i) {
    const std::uint64_t rep = kPoolOffset + i;
    const FbmPath x = sampler.x_sampler().sample(make_seed(c.seed, rep, StreamTag::fbm));
    const FbmPath w = sampler.w_sampler()->sample(make_seed(c.seed, rep, StreamTag::noise));
    const BmPath y = sample_bm(c.t, c.t, make_seed(c.seed, rep, StreamTag::endpoint));
    const double yt = y.values().back();
    lhs[i] = f(evaluate_z(x, yt)) - f(0.0) + correction_integral(f, x, w, yt, c.kappa3);
  });

  Table table = make_table(c);
  parallel_for(c.replicas, threads, [&](std::size_t i) {
    const JointSample base = sampler.sample(c.seed, i);
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
      const int n = c.levels[k];
      const JointSample js = n == base.level ? base : base.at_level(n);
      table[k][i] = skeletal_variation(fp, js, c.t, 1);
    }
  });

  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    LevelStatistics s = describe(c.levels[k], table[k]);
    const KsResult ks = ks_two_sample(lhs, table[k]);
    s.ks_distance = ks.statistic;
    s.ks_p_value = ks.p_value;
    r.per_level.push_back(s);
  }
  const double first = r.per_level.front().ks_distance;
  const double last = r.per_level.back().ks_distance;
  r.checks.push_back({"ks_distance_last_below_first", last, first, last < first, true});
  const double p = r.per_level.back().ks_p_value;
  r.checks.push_back({"ks_p_value_last", p, 0.01, p > 0.01, false});
}

void subcritical(const VerifyConfig& c, VerificationReport& r, unsigned threads) {
  const auto one = SmoothFunction::constant(1.0);
  const bool exact = c.walk_source == WalkSource::exact;
  const JointSampler sampler(spec_for(c, false));
  Table table = make_table(c);
  parallel_for(c.replicas, threads, [&](std::size_t i) {
    if (exact) {
      const FbmPath x = sampler.x_sampler().sample(make_seed(c.seed, i, StreamTag::fbm));
      for (std::size_t k = 0; k < c.levels.size(); ++k) {
        const int n = c.levels[k];
        const std::size_t steps = steps_for_horizon(n, c.t);
        const auto walk = sample_walk_positions(
            steps, make_seed(c.seed, i, StreamTag::walk).with_substream(static_cast<std::uint32_t>(n)));
        table[k][i] = symmetric_variation_skeletal(one, x, crossing_counts(walk, steps, n), 3);
      }
    } else {
      const JointSample base = sampler.sample(c.seed, i);
      for (std::size_t k = 0; k < c.levels.size(); ++k) {
        const int n = c.levels[k];
        const JointSample js = n == base.level ? base : base.at_level(n);
        table[k][i] = symmetric_variation_skeletal(one, *js.x, crossing_counts(js.skeleton, c.t), 3);
      }
    }
  });
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    r.per_level.push_back(describe(c.levels[k], table[k]));
    points.emplace_back(c.levels[k], r.per_level.back().variance);
  }
  const SlopeFit fit = fit_log2_slope(points);
  r.slope = fit.slope;
  r.slope_std_error = fit.std_error;
  const double gap = std::abs(fit.slope - r.slope_target);
  r.checks.push_back({"slope_within_tolerance", gap, c.slope_tolerance, gap <= c.slope_tolerance, true});
}

}  // namespace

VerificationReport verify_branch(const VerifyConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.branch = config.branch;
  r.hurst = config.hurst;
  r.function = config.branch == Branch::subcritical ? "one" : SmoothFunction::parse(config.function).descriptor();
  r.t = config.t;
  r.levels = config.levels;
  r.replicas = config.replicas;
  r.seed = config.seed;
  r.slope = std::numeric_limits<double>::quiet_NaN();
  r.slope_std_error = std::numeric_limits<double>::quiet_NaN();
  r.slope_target = config.branch == Branch::subcritical ? (1.0 - 6.0 * config.hurst) / 2.0
                                                        : std::numeric_limits<double>::quiet_NaN();
  const unsigned threads = resolve_threads(config.threads);
  switch (config.branch) {
    case Branch::supercritical:
      supercritical(config, r, threads);
      break;
    case Branch::critical:
      critical(config, r, threads);
      break;
    case Branch::subcritical:
      subcritical(config, r, threads);
      break;
  }
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace fbmbt
