#include "fbmbt/variations.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fbmbt/errors.hpp"
#include "fbmbt/summation.hpp"

namespace fbmbt {

namespace {

double odd_power(double d, int order) {
  double acc = d;
  const double d2 = d * d;
  for (int k = 1; k < order; k += 2) acc *= d2;
  return acc;
}

void require_odd(int order) {
  if (order < 1 || order % 2 == 0) {
    throw std::invalid_argument("variation order must be odd and >= 1, got " + std::to_string(order));
  }
}

}  // namespace

double hermite(int p, double x) {
  if (p < 0 || p > kMaxHermiteDegree) {
    throw std::out_of_range("hermite: degree must lie in [0, 13], got " + std::to_string(p));
  }
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < p; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<std::int64_t> hermite_monomial_coeffs(int p) {
  if (p < 0 || p > kMaxHermiteDegree) throw std::out_of_range("hermite_monomial_coeffs: degree out of range");
  std::vector<std::int64_t> prev{1};
  if (p == 0) return prev;
  std::vector<std::int64_t> cur{0, 1};
  for (int k = 1; k < p; ++k) {
    std::vector<std::int64_t> next(static_cast<std::size_t>(k) + 2, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= k * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<std::int64_t> odd_power_hermite_coeffs_exact(int r) {
  if (r < 1 || r > 7) throw std::out_of_range("odd_power_hermite_coeffs: r must lie in [1, 7]");
  const int degree = 2 * r - 1;
  std::vector<std::int64_t> residual(static_cast<std::size_t>(degree) + 1, 0);
  residual[static_cast<std::size_t>(degree)] = 1;
  std::vector<std::int64_t> a(static_cast<std::size_t>(r), 0);
  // Peel off the leading odd Hermite polynomial; each is monic.
  for (int l = r; l >= 1; --l) {
    const int p = 2 * l - 1;
    const std::int64_t coeff = residual[static_cast<std::size_t>(p)];
    a[static_cast<std::size_t>(l - 1)] = coeff;
    const auto h = hermite_monomial_coeffs(p);
    for (std::size_t i = 0; i < h.size(); ++i) residual[i] -= coeff * h[i];
  }
  if (std::any_of(residual.begin(), residual.end(), [](std::int64_t v) { return v != 0; })) {
    throw std::logic_error("odd_power_hermite_coeffs: elimination left a remainder");
  }
  return a;
}

std::vector<double> odd_power_hermite_coeffs(int r) {
  const auto exact = odd_power_hermite_coeffs_exact(r);
  return {exact.begin(), exact.end()};
}

LevelGrid::LevelGrid(const FbmPath& path, int level) : path_(&path), level_(level) {
  if (level < 1) throw std::invalid_argument("LevelGrid: level must be >= 1");
  const double target = std::exp2(-0.5 * level);
  const double ratio = target / path.spacing();
  const double rounded = std::nearbyint(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw std::invalid_argument("LevelGrid: path spacing " + std::to_string(path.spacing()) +
                                " does not divide the level-" + std::to_string(level) + " spacing " +
                                std::to_string(target));
  }
  stride_ = static_cast<std::int64_t>(rounded);
  reach_ = path.half_extent() / stride_;
}

void LevelGrid::require(std::int64_t lo, std::int64_t hi) const {
  const std::int64_t need = std::max(std::abs(lo), std::abs(hi));
  if (need > reach_) {
    const double required = static_cast<double>(need) * std::exp2(-0.5 * level_);
    throw ExtentError("fBm grid reaches |x| <= " + std::to_string(path_->max_time()) +
                          " but level-" + std::to_string(level_) + " index " + std::to_string(need) +
                          " needs extent " + std::to_string(required),
                      required);
  }
}

std::vector<double> skeletal_z_values(const FbmPath& x, const SkeletalStructure& skeleton, std::size_t steps) {
  if (skeleton.steps() < steps) {
    throw InsufficientStepsError("skeleton has " + std::to_string(skeleton.steps()) + " steps, " +
                                     std::to_string(steps) + " required",
                                 steps - skeleton.steps());
  }
  const LevelGrid grid(x, skeleton.level);
  const auto first = skeleton.walk.begin();
  const auto last = first + static_cast<std::ptrdiff_t>(steps) + 1;
  const auto [lo, hi] = std::minmax_element(first, last);
  grid.require(*lo, *hi);
  std::vector<double> z(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) z[k] = grid[skeleton.walk[k]];
  return z;
}

double symmetric_variation_direct(const SmoothFunction& f, std::span<const double> z, int order) {
  require_odd(order);
  if (z.size() < 2) throw std::invalid_argument("symmetric_variation_direct: need at least two values");
  CompensatedSum sum;
  double fa = f(z[0]);
  for (std::size_t k = 0; k + 1 < z.size(); ++k) {
    const double fb = f(z[k + 1]);
    sum += 0.5 * (fa + fb) * odd_power(z[k + 1] - z[k], order);
    fa = fb;
  }
  return sum.value();
}

double symmetric_variation_skeletal(const SmoothFunction& f, const FbmPath& x, const CrossingCounts& counts,
                                    int order) {
  require_odd(order);
  const std::int32_t terminal = counts.terminal;
  if (terminal == 0) return 0.0;
  const LevelGrid grid(x, counts.level);
  const std::int32_t lo = std::min<std::int32_t>(terminal, 0);
  const std::int32_t hi = std::max<std::int32_t>(terminal, 0);
  grid.require(lo, hi);
  CompensatedSum sum;
  double xa = grid[lo];
  double fa = f(xa);
  for (std::int32_t j = lo; j < hi; ++j) {
    const double xb = grid[j + 1];
    const double fb = f(xb);
    const int weight = updown_difference(terminal, j);
    sum += weight * (0.5 * (fa + fb) * odd_power(xb - xa, order));
    xa = xb;
    fa = fb;
  }
  return sum.value();
}

double rescaled_increment(const FbmPath& x, int level, std::int64_t j, Side side) {
  if (j < 0) throw std::invalid_argument("rescaled_increment: j must be >= 0");
  const LevelGrid grid(x, level);
  grid.require(0, j + 1);
  const double scale = std::exp2(0.5 * level * x.hurst().value());
  if (side == Side::plus) return scale * (grid[j + 1] - grid[j]);
  return scale * (grid[-j - 1] - grid[-j]);
}

std::int64_t level_steps(int level, double t) {
  const double v = std::abs(t) * std::exp2(0.5 * level);
  const double r = std::nearbyint(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(v));
}

namespace {

template <class Sink>
void hermite_terms(const SmoothFunction& f, const FbmPath& x, int level, int order, std::int64_t steps, Side side,
                   Sink&& sink) {
  if (order < 1 || order > kMaxHermiteDegree) {
    throw std::out_of_range("weighted_hermite_variation: order must lie in [1, 13]");
  }
  if (steps < 0) throw std::invalid_argument("weighted_hermite_variation: negative step count");
  const LevelGrid grid(x, level);
  grid.require(0, steps);
  const double scale = std::exp2(0.5 * level * x.hurst().value());
  const std::int64_t dir = side == Side::plus ? 1 : -1;
  double xa = grid[0];
  double fa = f(xa);
  for (std::int64_t j = 0; j < steps; ++j) {
    const double xb = grid[dir * (j + 1)];
    const double fb = f(xb);
    sink(0.5 * (fa + fb) * hermite(order, scale * (xb - xa)));
    xa = xb;
    fa = fb;
  }
}

}  // namespace

double weighted_hermite_variation_steps(const SmoothFunction& f, const FbmPath& x, int level, int order,
                                        std::int64_t steps, Side side) {
  CompensatedSum sum;
  hermite_terms(f, x, level, order, steps, side, [&](double term) { sum += term; });
  return sum.value();
}

double weighted_hermite_variation(const SmoothFunction& f, const FbmPath& x, int level, int order, double t) {
  return weighted_hermite_variation_steps(f, x, level, order, level_steps(level, t),
                                          t >= 0.0 ? Side::plus : Side::minus);
}

double HermiteVariationProfile::at(double t) const {
  const auto steps = static_cast<std::size_t>(level_steps(level, t));
  const auto& branch = t >= 0.0 ? plus : minus;
  if (steps >= branch.size()) {
    throw ExtentError("HermiteVariationProfile: t beyond profile", std::abs(t));
  }
  return branch[steps];
}

HermiteVariationProfile hermite_variation_profile(const SmoothFunction& f, const FbmPath& x, int level, int order,
                                                  std::int64_t max_steps) {
  HermiteVariationProfile profile;
  profile.level = level;
  for (Side side : {Side::plus, Side::minus}) {
    auto& out = side == Side::plus ? profile.plus : profile.minus;
    out.reserve(static_cast<std::size_t>(max_steps) + 1);
    out.push_back(0.0);
    CompensatedSum sum;
    hermite_terms(f, x, level, order, max_steps, side, [&](double term) {
      sum += term;
      out.push_back(sum.value());
    });
  }
  return profile;
}

void write_variation_csv_header(std::ostream& out) { out << "order,level,horizon,mode,value,seed\n"; }

void write_variation_csv_row(std::ostream& out, const VariationSeries& row) {
  const auto precision = out.precision(17);
  out << row.order << ',' << row.level << ',' << row.horizon << ','
      << (row.mode == VariationSeries::Mode::direct ? "direct" : "skeletal") << ',' << row.value << ','
      << row.seed.master << ':' << row.seed.replica << ':' << row.seed.stream << ':' << row.seed.substream << '\n';
  out.precision(precision);
}

}  // namespace fbmbt
