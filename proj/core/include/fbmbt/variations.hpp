#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fbmbt/fgn.hpp"
#include "fbmbt/skeleton.hpp"
#include "fbmbt/smooth_function.hpp"

namespace fbmbt {

/// Largest Hermite degree exposed by hermite().
inline constexpr int kMaxHermiteDegree = 13;

/// Probabilists' monic Hermite polynomial H_p(x), p <= 13.
double hermite(int p, double x);

/// Integer coefficients of H_p in the monomial basis, lowest degree first.
std::vector<std::int64_t> hermite_monomial_coeffs(int p);

/// a_{r,1..r} with x^{2r-1} = sum_l a_{r,l} H_{2l-1}(x), r <= 7. Computed by
/// exact integer elimination on monomial coefficients.
std::vector<std::int64_t> odd_power_hermite_coeffs_exact(int r);
std::vector<double> odd_power_hermite_coeffs(int r);

enum class Side { plus, minus };

/// View of an fBm path on the level-n grid {j 2^{-n/2}}. The path spacing
/// must equal 2^{-n/2} divided by a positive integer stride.
class LevelGrid {
 public:
  LevelGrid(const FbmPath& path, int level);

  [[nodiscard]] double operator[](std::int64_t j) const { return path_->at(j * stride_); }
  /// Largest |j| available on both sides.
  [[nodiscard]] std::int64_t reach() const noexcept { return reach_; }
  [[nodiscard]] std::int64_t stride() const noexcept { return stride_; }
  [[nodiscard]] int level() const noexcept { return level_; }
  /// Throws ExtentError unless every j in [lo, hi] is on the grid.
  void require(std::int64_t lo, std::int64_t hi) const;

 private:
  const FbmPath* path_;
  int level_;
  std::int64_t stride_;
  std::int64_t reach_;
};

/// Z at the hitting times T_0..T_steps: X evaluated on the walk positions.
std::vector<double> skeletal_z_values(const FbmPath& x, const SkeletalStructure& skeleton, std::size_t steps);

/// sum_k (f(z_k) + f(z_{k+1}))/2 (z_{k+1} - z_k)^order, order odd.
double symmetric_variation_direct(const SmoothFunction& f, std::span<const double> z, int order);

/// The same quantity evaluated through the crossing counts of the walk:
/// sum_j (f(X_j) + f(X_{j+1}))/2 (X_{j+1} - X_j)^order (U_j - D_j), where the
/// up/down difference depends only on the terminal position.
double symmetric_variation_skeletal(const SmoothFunction& f, const FbmPath& x, const CrossingCounts& counts,
                                    int order);

/// 2^{nH/2} (X_{+-(j+1)2^{-n/2}} - X_{+-j 2^{-n/2}}).
double rescaled_increment(const FbmPath& x, int level, std::int64_t j, Side side);

/// W_n^{(order)}(f, t): Hermite-weighted variation over the first
/// floor(2^{n/2}|t|) level-grid steps on the side given by the sign of t.
double weighted_hermite_variation(const SmoothFunction& f, const FbmPath& x, int level, int order, double t);

/// Same as above with the number of grid steps given directly.
double weighted_hermite_variation_steps(const SmoothFunction& f, const FbmPath& x, int level, int order,
                                        std::int64_t steps, Side side);

/// Running sums of W_{+,n} and W_{-,n}: plus[k] = W_{+,n}(f, k 2^{-n/2}),
/// minus[k] = W_{-,n}(f, k 2^{-n/2}), k = 0..max_steps.
struct HermiteVariationProfile {
  std::vector<double> plus;
  std::vector<double> minus;
  int level = 1;

  /// W_n(f, t) for any t with floor(2^{n/2}|t|) <= max_steps.
  [[nodiscard]] double at(double t) const;
};

HermiteVariationProfile hermite_variation_profile(const SmoothFunction& f, const FbmPath& x, int level, int order,
                                                  std::int64_t max_steps);

/// floor(2^{n/2} |t|), snapping values within 1e-9 of an integer.
std::int64_t level_steps(int level, double t);

/// One evaluated V_n^{(order)}(f, t).
struct VariationSeries {
  enum class Mode { direct, skeletal };

  int order = 1;
  int level = 1;
  double horizon = 0.0;
  Mode mode = Mode::direct;
  double value = 0.0;
  SeedRecord seed;
};

void write_variation_csv_header(std::ostream& out);
void write_variation_csv_row(std::ostream& out, const VariationSeries& row);

}  // namespace fbmbt
