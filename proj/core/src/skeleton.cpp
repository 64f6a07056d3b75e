#include "fbmbt/skeleton.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fbmbt/errors.hpp"

namespace fbmbt {

const char* to_string(RefinementMode mode) { return mode == RefinementMode::bridge ? "bridge" : "naive"; }

RefinementMode parse_refinement_mode(const std::string& text) {
  if (text == "bridge") return RefinementMode::bridge;
  if (text == "naive") return RefinementMode::naive;
  throw std::invalid_argument("unknown refinement mode '" + text + "' (expected bridge or naive)");
}

double SkeletalStructure::grid_spacing() const noexcept { return std::exp2(-0.5 * level); }

std::size_t steps_for_horizon(int level, double t) {
  if (t < 0.0) throw std::invalid_argument("steps_for_horizon: negative horizon");
  return static_cast<std::size_t>(std::floor(std::ldexp(t, level)));
}

namespace {

// Probability that a bridge from a to b (both inside the band) over a
// time interval of variance v touches the barrier at distance da, db.
double touch_probability(double da, double db, double v) { return std::exp(-2.0 * da * db / v); }

constexpr double kNegligible = 1e-10;
// Finest refinement: bridge variance of 2^{-6} grid units squared, i.e. a
// time resolution of 2^{-n-6}.
constexpr double kLeafVariance = 0x1.0p-6;

class Scanner {
 public:
  Scanner(SkeletalStructure& sk, double rate, RandomStream* rng) : sk_(sk), rate_(rate), rng_(rng) {}

  void naive(double s, double h, double ya, double yb) {
    // Every barrier passed between samples is one step; times interpolate.
    while (true) {
      const double up = anchor_ + 1.0;
      const double lo = anchor_ - 1.0;
      double barrier;
      if (yb >= up) {
        barrier = up;
      } else if (yb <= lo) {
        barrier = lo;
      } else {
        return;
      }
      record(s + h * (barrier - ya) / (yb - ya), barrier > anchor_ ? 1 : -1);
    }
  }

  void bridge(double s, double h, double ya, double yb) {
    const double v = rate_ * h;
    const double up = anchor_ + 1.0;
    const double lo = anchor_ - 1.0;
    const bool beyond = yb >= up || yb <= lo;
    if (!beyond) {
      const double pu = touch_probability(up - ya, up - yb, v);
      const double pl = touch_probability(ya - lo, yb - lo, v);
      if (pu + pl < kNegligible) return;
      if (v <= kLeafVariance) {
        const double u = rng_->uniform();
        if (u < pu) {
          record(s + 0.5 * h, 1);
        } else if (u < pu + pl) {
          record(s + 0.5 * h, -1);
        }
        return;
      }
    } else if (v <= kLeafVariance) {
      naive(s, h, ya, yb);
      return;
    }
    const double mid = 0.5 * (ya + yb) + 0.5 * std::sqrt(v) * rng_->normal();
    const double half = 0.5 * h;
    bridge(s, half, ya, mid);
    bridge(s + half, half, mid, yb);
  }

 private:
  void record(double t, int direction) {
    anchor_ += direction;
    // Crossings resolved inside one leaf can coincide in floating point.
    if (!(t > sk_.times.back())) t = std::nextafter(sk_.times.back(), INFINITY);
    sk_.times.push_back(t);
    sk_.walk.push_back(static_cast<std::int32_t>(anchor_));
  }

  SkeletalStructure& sk_;
  double rate_;
  RandomStream* rng_;
  long anchor_ = 0;
};

}  // namespace

SkeletalStructure build_skeleton(const BmPath& path, int level, RefinementMode mode) {
  if (level < 1) throw std::invalid_argument("build_skeleton: level must be >= 1");
  const double required = std::exp2(-level - 2);
  if (path.spacing() > required * (1.0 + 1e-12)) {
    throw std::invalid_argument("build_skeleton: path spacing " + std::to_string(path.spacing()) +
                                " too coarse for level " + std::to_string(level) + "; required spacing <= " +
                                std::to_string(required));
  }

  SkeletalStructure sk;
  sk.level = level;
  sk.mode = mode;
  sk.source = SkeletalStructure::Source::path;
  sk.seed = path.seed_record().with_stream(StreamTag::bridge).with_substream(static_cast<std::uint32_t>(level));

  const double scale = std::exp2(0.5 * level);  // grid units per unit of Y
  const double rate = std::exp2(level);         // variance rate in grid units
  const double h = path.spacing();
  const auto values = path.values();

  RandomStream rng(sk.seed);
  Scanner scan(sk, rate, &rng);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double s = static_cast<double>(i) * h;
    const double ya = values[i] * scale;
    const double yb = values[i + 1] * scale;
    if (mode == RefinementMode::naive) {
      scan.naive(s, h, ya, yb);
    } else {
      scan.bridge(s, h, ya, yb);
    }
  }
  return sk;
}

std::int64_t CrossingCounts::up_at(std::int32_t j) const {
  auto it = up.find(j);
  return it == up.end() ? 0 : it->second;
}

std::int64_t CrossingCounts::down_at(std::int32_t j) const {
  auto it = down.find(j);
  return it == down.end() ? 0 : it->second;
}

CrossingCounts crossing_counts(std::span<const std::int32_t> walk, std::size_t steps, int level) {
  if (walk.empty() || walk.size() - 1 < steps) {
    const std::size_t have = walk.empty() ? 0 : walk.size() - 1;
    throw InsufficientStepsError("crossing_counts: walk has " + std::to_string(have) + " steps, " +
                                     std::to_string(steps) + " required (short by " +
                                     std::to_string(steps - have) + ")",
                                 steps - have);
  }
  CrossingCounts c;
  c.level = level;
  c.steps = steps;
  c.horizon = std::ldexp(static_cast<double>(steps), -level);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::int32_t a = walk[k];
    const std::int32_t b = walk[k + 1];
    if (b == a + 1) {
      ++c.up[a];
    } else if (b == a - 1) {
      ++c.down[b];
    } else {
      throw std::invalid_argument("crossing_counts: walk step " + std::to_string(k) + " is not +-1");
    }
  }
  c.terminal = walk[steps];
  return c;
}

CrossingCounts crossing_counts(const SkeletalStructure& skeleton, double t) {
  CrossingCounts c = crossing_counts(skeleton.walk, steps_for_horizon(skeleton.level, t), skeleton.level);
  c.horizon = t;
  return c;
}

int updown_difference(std::int32_t terminal, std::int32_t j) noexcept {
  if (terminal > 0) return (0 <= j && j < terminal) ? 1 : 0;
  if (terminal < 0) return (terminal <= j && j < 0) ? -1 : 0;
  return 0;
}

std::vector<std::int32_t> sample_walk_positions(std::size_t steps, const SeedRecord& seed) {
  RandomStream rng(seed);
  std::vector<std::int32_t> walk(steps + 1, 0);
  std::uint64_t word = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (k % 64 == 0) word = rng.bits();
    walk[k + 1] = walk[k] + ((word & 1u) ? 1 : -1);
    word >>= 1;
  }
  return walk;
}

SkeletalStructure sample_walk_exact(int level, std::size_t steps, const SeedRecord& seed) {
  if (level < 1) throw std::invalid_argument("sample_walk_exact: level must be >= 1");
  if (steps < 1) throw std::invalid_argument("sample_walk_exact: need at least one step");
  SkeletalStructure sk;
  sk.level = level;
  sk.mode = RefinementMode::bridge;
  sk.source = SkeletalStructure::Source::exact_law;
  sk.seed = seed;
  sk.walk = sample_walk_positions(steps, seed.with_stream(StreamTag::walk));
  sk.times.assign(steps + 1, 0.0);
  RandomStream rng(seed.with_stream(StreamTag::exit_time));
  const double unit = std::exp2(-level);
  for (std::size_t k = 0; k < steps; ++k) sk.times[k + 1] = sk.times[k] + unit * sample_exit_time(rng);
  return sk;
}

}  // namespace fbmbt
