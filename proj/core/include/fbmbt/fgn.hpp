#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fbmbt/rng.hpp"

namespace fbmbt {

class HurstParameter {
 public:
  enum class Regime { subcritical, critical, supercritical };

  static constexpr double kCritical = 1.0 / 6.0;
  static constexpr double kCriticalTolerance = 1e-12;

  /// Throws std::invalid_argument unless 0 < value < 1.
  explicit HurstParameter(double value);

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] Regime regime() const noexcept;

 private:
  double value_;
};

const char* to_string(HurstParameter::Regime regime);

/// Two-sided fractional Brownian path on the grid i*h, i = -M..M.
class FbmPath {
 public:
  FbmPath(HurstParameter hurst, double spacing, std::int64_t half_extent, std::vector<double> values,
          SeedRecord seed);

  [[nodiscard]] HurstParameter hurst() const noexcept { return hurst_; }
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] std::int64_t half_extent() const noexcept { return half_extent_; }
  [[nodiscard]] double max_time() const noexcept { return static_cast<double>(half_extent_) * spacing_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const SeedRecord& seed_record() const noexcept { return seed_; }

  /// Value at signed grid index i in [-M, M]; unchecked.
  [[nodiscard]] double at(std::int64_t i) const noexcept {
    return values_[static_cast<std::size_t>(i + half_extent_)];
  }
  [[nodiscard]] double time_of(std::int64_t i) const noexcept { return static_cast<double>(i) * spacing_; }

  /// Nearest grid index to time t. Throws ExtentError outside the grid.
  [[nodiscard]] std::int64_t nearest_index(double t) const;

 private:
  HurstParameter hurst_;
  double spacing_;
  std::int64_t half_extent_;
  std::vector<double> values_;
  SeedRecord seed_;
};

/// One-sided standard Brownian path on the grid i*h, i = 0..N.
class BmPath {
 public:
  BmPath(double spacing, std::vector<double> values, SeedRecord seed);

  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] double horizon() const noexcept {
    return static_cast<double>(values_.size() - 1) * spacing_;
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const SeedRecord& seed_record() const noexcept { return seed_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  /// Value at the sample nearest to t. Throws ExtentError beyond the horizon.
  [[nodiscard]] double value_at(double t) const;

 private:
  double spacing_;
  std::vector<double> values_;
  SeedRecord seed_;
};

/// E[X_t X_s] = (|s|^2H + |t|^2H - |t-s|^2H) / 2.
double fbm_covariance(double t, double s, HurstParameter hurst);

/// Autocovariance of unit-spacing fractional Gaussian noise,
/// rho(q) = (|q+1|^2H + |q-1|^2H - 2|q|^2H) / 2.
double increment_autocovariance(std::int64_t q, HurstParameter hurst);

enum class SamplerMethod { automatic, circulant, cholesky };

/// Exact sampler for two-sided fBm on a fixed grid. The stationary increment
/// sequence over the whole grid -M..M is drawn by circulant embedding; when
/// the embedding spectrum is negative beyond 1e-8 of its maximum the sampler
/// switches to a Cholesky factor of the exact increment covariance.
///
/// Construction does all the spectral work; sample() is const and may be
/// called concurrently.
class FbmSampler {
 public:
  FbmSampler(HurstParameter hurst, double spacing, std::int64_t half_extent,
             SamplerMethod method = SamplerMethod::automatic);
  ~FbmSampler();
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  [[nodiscard]] FbmPath sample(const SeedRecord& seed) const;

  [[nodiscard]] SamplerMethod method() const noexcept;
  /// Smallest embedding eigenvalue divided by the largest (1 when the
  /// Cholesky route was requested explicitly).
  [[nodiscard]] double min_eigenvalue_ratio() const noexcept;
  [[nodiscard]] HurstParameter hurst() const noexcept { return hurst_; }
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] std::int64_t half_extent() const noexcept { return half_extent_; }

  /// Largest increment count for which the Cholesky fallback is attempted.
  static constexpr std::int64_t kCholeskyLimit = 4096;

 private:
  struct Impl;
  HurstParameter hurst_;
  double spacing_;
  std::int64_t half_extent_;
  std::unique_ptr<Impl> impl_;
};

FbmPath sample_fbm_two_sided(HurstParameter hurst, double spacing, std::int64_t half_extent,
                             const SeedRecord& seed);

/// Cumulative sum of i.i.d. N(0, spacing) increments; ceil(horizon/spacing)
/// steps.
BmPath sample_bm(double horizon, double spacing, const SeedRecord& seed);

}  // namespace fbmbt
