#pragma once

#include <cstdint>
#include <vector>

#include "fbmbt/check.hpp"
#include "fbmbt/fgn.hpp"

namespace fbmbt {

/// sum_{k=0}^{floor(2^n t)-1} (X_{(k+1)2^{-n}} - X_{k 2^{-n}})^power on the
/// positive side. The path spacing must be exactly 2^{-n}.
double power_variation(const FbmPath& path, int power, int level, double t);

struct ScalingConfig {
  double hurst = 0.5;
  int power = 2;
  double t = 1.0;
  std::vector<int> levels{10, 12, 14, 16};
  std::size_t replicas = 50;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct ScalingLevel {
  int level = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double median_abs_error = 0.0;  // power 2: median |normalized - t|
  double ks_statistic = 0.0;      // against N(0, sigma2 t) for power 3, fitted normal for power 2
  double ks_p_value = 1.0;
};

struct ScalingReport {
  static constexpr int kSchemaVersion = 1;

  double hurst = 0.0;
  int power = 2;
  double t = 0.0;
  std::vector<int> levels;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<ScalingLevel> per_level;
  double estimated_sigma2 = 0.0;  // power 3 only
  double sigma2_std_error = 0.0;
  std::vector<Check> checks;
  double wall_time_seconds = 0.0;

  [[nodiscard]] bool passed() const;
};

/// 2^{n(2H-1)} times the quadratic variation, per level; the report carries
/// the median of |normalized - t| over replicas.
ScalingReport check_quadratic(const ScalingConfig& config);

/// 2^{n(3H-1/2)} times the cubic variation, per level, H < 1/2. sigma_H^2 is
/// the replica variance at the largest level divided by t; every level is
/// then tested against N(0, sigma_H^2 t).
ScalingReport check_cubic(const ScalingConfig& config);

/// Dispatches on config.power.
ScalingReport run_scaling(const ScalingConfig& config);

}  // namespace fbmbt
