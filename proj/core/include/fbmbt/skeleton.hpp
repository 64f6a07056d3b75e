#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fbmbt/fgn.hpp"
#include "fbmbt/rng.hpp"

namespace fbmbt {

/// How hitting times of the level grid are resolved between path samples.
///   bridge: intervals that may contain a crossing are refined by Brownian
///           bridge midpoint draws; at the finest scale excursions that touch
///           a grid line without showing in the endpoints are accepted with
///           the bridge boundary-crossing probability.
///   naive:  only sample-to-sample passages across a grid line count; the
///           crossing time is linearly interpolated.
enum class RefinementMode { bridge, naive };

const char* to_string(RefinementMode mode);
RefinementMode parse_refinement_mode(const std::string& text);

/// Hitting times T_{k,n} of the grid {j 2^{-n/2}} and the embedded simple
/// random walk, stored in integer grid units.
struct SkeletalStructure {
  enum class Source { path, exact_law };

  int level = 1;
  std::vector<double> times{0.0};
  std::vector<std::int32_t> walk{0};
  RefinementMode mode = RefinementMode::bridge;
  Source source = Source::path;
  SeedRecord seed;  // bridge stream for path sources, walk stream for exact draws

  [[nodiscard]] std::size_t steps() const noexcept { return walk.size() - 1; }
  [[nodiscard]] double grid_spacing() const noexcept;
};

/// floor(2^n t), the number of walk steps that approximate [0, t].
std::size_t steps_for_horizon(int level, double t);

/// Requires path.spacing() <= 2^{-n-2}; throws std::invalid_argument naming
/// the required spacing otherwise.
SkeletalStructure build_skeleton(const BmPath& path, int level, RefinementMode mode = RefinementMode::bridge);

struct CrossingCounts {
  int level = 1;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::map<std::int32_t, std::int64_t> up;    // j -> #{k : walk j -> j+1}
  std::map<std::int32_t, std::int64_t> down;  // j -> #{k : walk j+1 -> j}
  std::int32_t terminal = 0;

  [[nodiscard]] std::int64_t up_at(std::int32_t j) const;
  [[nodiscard]] std::int64_t down_at(std::int32_t j) const;
};

/// Counts over the first floor(2^n t) steps by direct enumeration.
CrossingCounts crossing_counts(const SkeletalStructure& skeleton, double t);
/// Counts over the first `steps` steps of an arbitrary walk.
CrossingCounts crossing_counts(std::span<const std::int32_t> walk, std::size_t steps, int level);

/// U_j - D_j as a function of the terminal walk position j*.
int updown_difference(std::int32_t terminal, std::int32_t j) noexcept;

/// Fair +-1 walk of the given length starting at 0.
std::vector<std::int32_t> sample_walk_positions(std::size_t steps, const SeedRecord& seed);

/// Exact-law skeleton without a Brownian path: fair +-1 walk, inter-hitting
/// times 2^{-n} tau with tau the exit time of standard Brownian motion from
/// (-1, 1). Does not reconstruct Y between hitting times.
SkeletalStructure sample_walk_exact(int level, std::size_t steps, const SeedRecord& seed);

/// Exit time of standard Brownian motion started at 0 from (-1, 1).
double exit_time_cdf(double t);
double exit_time_survival(double t);
double exit_time_density(double t);
double exit_time_quantile(double u);
double sample_exit_time(RandomStream& rng);

}  // namespace fbmbt
