#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbmbt/calculus.hpp"
#include "fbmbt/check.hpp"

namespace fbmbt {

enum class Branch { supercritical, critical, subcritical };

const char* to_string(Branch branch);
Branch parse_branch(const std::string& text);

/// Where the walk for the subcritical branch comes from: the skeleton of a
/// sampled Brownian path, or the exact law of the embedded walk.
enum class WalkSource { path, exact };

const char* to_string(WalkSource source);
WalkSource parse_walk_source(const std::string& text);

struct VerifyConfig {
  Branch branch = Branch::supercritical;
  double hurst = 0.35;
  std::string function = "sin";
  double t = 1.0;
  std::vector<int> levels{8, 10, 12, 14};
  std::size_t replicas = 500;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int oversample = 4;
  RefinementMode mode = RefinementMode::bridge;
  WalkSource walk_source = WalkSource::exact;
  double kappa3 = kKappa3;
  double max_mean_ratio = 0.5;   // supercritical: mean_abs(last) / mean_abs(first)
  double slope_tolerance = 0.10;  // subcritical: |slope - (1 - 6H)/2|
};

/// Throws std::invalid_argument when the branch and H disagree or the MC
/// parameters are unusable.
void validate(const VerifyConfig& config);

struct LevelStatistics {
  int level = 0;
  double mean = 0.0;
  double mean_abs = 0.0;
  double p90 = 0.0;  // of |value|
  double variance = 0.0;
  double std_error = 0.0;  // of mean_abs
  double ks_distance = 0.0;
  double ks_p_value = 1.0;
};

struct VerificationReport {
  static constexpr int kSchemaVersion = 1;

  Branch branch = Branch::supercritical;
  double hurst = 0.0;
  std::string function;
  double t = 0.0;
  std::vector<int> levels;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<LevelStatistics> per_level;
  double slope = 0.0;
  double slope_std_error = 0.0;
  double slope_target = 0.0;
  std::vector<Check> checks;
  double wall_time_seconds = 0.0;

  /// All required checks passed.
  [[nodiscard]] bool passed() const;
  /// First failing required check, or nullptr.
  [[nodiscard]] const Check* first_failure() const;
};

/// supercritical: mean and 90th percentile of |ito_residual| per level.
/// critical: two-sample KS between f(Z_t) - f(0) + correction and V_n(f', t),
///   drawn from independent replica pools.
/// subcritical: variance of V_n^{(3)}(1, t) per level and its log2 slope.
/// Every level of one replica uses the same X (and Y), so level-to-level
/// comparisons are paired.
VerificationReport verify_branch(const VerifyConfig& config);

}  // namespace fbmbt
