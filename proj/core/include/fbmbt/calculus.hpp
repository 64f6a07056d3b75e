#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fbmbt/fgn.hpp"
#include "fbmbt/skeleton.hpp"
#include "fbmbt/smooth_function.hpp"

namespace fbmbt {

/// Constant of the corrective Brownian integral at H = 1/6 (known to three
/// decimals only).
inline constexpr double kKappa3 = 2.322;

/// X, Y and (optionally) an independent two-sided Brownian motion W, each from
/// its own stream, plus the skeleton of Y at one level.
struct JointSample {
  std::shared_ptr<const FbmPath> x;
  std::shared_ptr<const BmPath> y;
  std::shared_ptr<const FbmPath> w;  // null unless requested
  SkeletalStructure skeleton;
  int level = 1;
  SeedRecord seed;

  /// Same X, Y, W with the skeleton rebuilt at another level.
  [[nodiscard]] JointSample at_level(int n) const;
};

struct JointSampleSpec {
  HurstParameter hurst{0.5};
  int level = 8;
  double horizon = 1.0;
  double y_spacing = 0.0;
  double x_spacing = 0.0;
  std::int64_t x_half_extent = 0;
  bool with_noise = false;
  RefinementMode mode = RefinementMode::bridge;

  /// Grids fine enough for every level in `levels` (which must share
  /// parity): Y at spacing 2^{-n_max-2} out to t plus eight standard
  /// deviations of the hitting-time error at the coarsest level; X at
  /// 2^{-n_max/2}/oversample out to eight standard deviations of max |Y|.
  static JointSampleSpec for_levels(HurstParameter hurst, double t, std::span<const int> levels, int oversample,
                                    bool with_noise);
};

/// Holds the spectral factorisations so replicas only pay for the draws.
class JointSampler {
 public:
  explicit JointSampler(JointSampleSpec spec);

  [[nodiscard]] JointSample sample(std::uint64_t master, std::uint64_t replica) const;
  [[nodiscard]] const JointSampleSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const FbmSampler& x_sampler() const noexcept { return x_sampler_; }
  [[nodiscard]] const FbmSampler* w_sampler() const noexcept { return w_sampler_ ? &*w_sampler_ : nullptr; }

 private:
  JointSampleSpec spec_;
  FbmSampler x_sampler_;
  std::optional<FbmSampler> w_sampler_;
};

/// X at the grid point nearest to y (no interpolation). The snapping error is
/// of order h^H sqrt(2 ln(1/h)) for spacing h.
double evaluate_z(const FbmPath& x, double y);

/// f(b) - f(a) ~ sum_{r=1..7} c_r (f^{(2r-1)}(a) + f^{(2r-1)}(b)) (b-a)^{2r-1},
/// exact for polynomials of degree <= 13.
struct TaylorScheme {
  std::array<double, 7> c{};                                    // c_1..c_7
  std::array<std::pair<std::int64_t, std::int64_t>, 7> exact{};  // numerator, denominator
  int remainder_order = 14;

  [[nodiscard]] double coefficient(int r) const { return c.at(static_cast<std::size_t>(r - 1)); }
  /// Scheme value for f(b) - f(a).
  [[nodiscard]] double apply(const SmoothFunction& f, double a, double b) const;
};

/// Solved once with exact rational arithmetic and cached.
const TaylorScheme& taylor_coefficients();

/// f(Z_t) - f(0) - V_n(f', t), V_n at order 1 along the skeleton.
double ito_residual(const SmoothFunction& f, const JointSample& js, double t);

/// V_n(f, t) along the skeleton of js.
double skeletal_variation(const SmoothFunction& f, const JointSample& js, double t, int order = 1);

/// (kappa3/12) sum_i f'''(X_{s_i}) (W_{s_{i+1}} - W_{s_i}) over the X grid from
/// 0 to Y_t; for Y_t < 0 the sum walks the negative half-line.
double correction_integral(const SmoothFunction& f, const JointSample& js, double t, double kappa3 = kKappa3);
double correction_integral(const SmoothFunction& f, const FbmPath& x, const FbmPath& w, double y_end,
                           double kappa3 = kKappa3);

/// sum_k |Z_{T_{k+1}} - Z_{T_k}|^power over the first `steps` skeleton steps.
double skeletal_abs_power_sum(const FbmPath& x, const SkeletalStructure& skeleton, std::size_t steps, int power);

/// Terms of the Taylor assembly along a skeletal path z_0..z_M:
/// variations[r-1] = V^{(2r-1)}(f^{(2r-1)}), total = sum_r 2 c_r variations[r-1].
struct TaylorAssembly {
  std::array<double, 7> variations{};
  double total = 0.0;
};
TaylorAssembly taylor_assembly(const SmoothFunction& f, std::span<const double> z);

}  // namespace fbmbt
