#include "fbmbt/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "fbmbt/errors.hpp"
#include "fbmbt/summation.hpp"
#include "fbmbt/variations.hpp"

namespace fbmbt {

namespace {

std::int64_t next_power_of_two(double x) {
  std::int64_t p = 1;
  while (static_cast<double>(p) < x) p <<= 1;
  return p;
}

}  // namespace

JointSample JointSample::at_level(int n) const {
  JointSample out = *this;
  out.level = n;
  out.skeleton = build_skeleton(*y, n, skeleton.mode);
  return out;
}

JointSampleSpec JointSampleSpec::for_levels(HurstParameter hurst, double t, std::span<const int> levels,
                                            int oversample, bool with_noise) {
  if (levels.empty()) throw std::invalid_argument("at least one level is required");
  if (!(t > 0.0)) throw std::invalid_argument("horizon t must be positive");
  if (oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
  const int n_min = *lo;
  const int n_max = *hi;
  if (n_min < 1) throw std::invalid_argument("levels must be >= 1");
  for (int n : levels)
    if ((n_max - n) % 2 != 0)
      throw std::invalid_argument("levels sharing one X grid must have the same parity");

  JointSampleSpec spec;
  spec.hurst = hurst;
  spec.level = n_max;
  spec.horizon = t + 8.0 * std::sqrt(t * std::ldexp(1.0, -n_min));
  spec.y_spacing = std::ldexp(1.0, -n_max - 2);
  spec.x_spacing = std::ldexp(1.0, -n_max / 2) / oversample;
  if (n_max % 2 != 0) spec.x_spacing /= std::sqrt(2.0);
  const double reach = 8.0 * std::sqrt(spec.horizon) + 1.0;
  spec.x_half_extent = next_power_of_two(reach / spec.x_spacing);
  spec.with_noise = with_noise;
  return spec;
}

JointSampler::JointSampler(JointSampleSpec spec)
    : spec_(spec), x_sampler_(spec.hurst, spec.x_spacing, spec.x_half_extent) {
  if (spec.with_noise) w_sampler_.emplace(HurstParameter(0.5), spec.x_spacing, spec.x_half_extent);
}

JointSample JointSampler::sample(std::uint64_t master, std::uint64_t replica) const {
  JointSample js;
  js.seed = make_seed(master, replica, StreamTag::fbm);
  js.level = spec_.level;
  js.x = std::make_shared<FbmPath>(x_sampler_.sample(js.seed));
  js.y = std::make_shared<BmPath>(
      sample_bm(spec_.horizon, spec_.y_spacing, make_seed(master, replica, StreamTag::brownian)));
  if (w_sampler_) js.w = std::make_shared<FbmPath>(w_sampler_->sample(make_seed(master, replica, StreamTag::noise)));
  js.skeleton = build_skeleton(*js.y, spec_.level, spec_.mode);
  return js;
}

double evaluate_z(const FbmPath& x, double y) { return x.at(x.nearest_index(y)); }

double TaylorScheme::apply(const SmoothFunction& f, double a, double b) const {
  const double d = b - a;
  double dp = d;
  double sum = 0.0;
  for (int r = 1; r <= 7; ++r) {
    const int k = 2 * r - 1;
    sum += c[static_cast<std::size_t>(r - 1)] * (f.derivative(k, a) + f.derivative(k, b)) * dp;
    dp *= d * d;
  }
  return sum;
}

const TaylorScheme& taylor_coefficients() {
  static const TaylorScheme scheme = [] {
    using boost::multiprecision::cpp_int;
    using Q = boost::rational<cpp_int>;
    auto falling = [](int k, int j) {
      cpp_int v = 1;
      for (int i = 0; i < j; ++i) v *= k - i;
      return v;
    };
    // Row i: f = x^{2i+1} on [0, 1]. Column m: derivative order 2m+1. The
    // system is lower triangular.
    std::array<Q, 7> c;
    for (int i = 0; i < 7; ++i) {
      const int k = 2 * i + 1;
      Q rhs(1);
      for (int m = 0; m < i; ++m) rhs -= c[static_cast<std::size_t>(m)] * Q(falling(k, 2 * m + 1));
      c[static_cast<std::size_t>(i)] = rhs / Q(2 * falling(k, k));
    }
    if (c[0] != Q(1, 2) || c[1] != Q(-1, 24))
      throw std::logic_error("Taylor scheme: leading coefficients are not 1/2 and -1/24");
    TaylorScheme s;
    for (std::size_t i = 0; i < 7; ++i) {
      s.exact[i] = {static_cast<std::int64_t>(c[i].numerator()), static_cast<std::int64_t>(c[i].denominator())};
      s.c[i] = static_cast<double>(s.exact[i].first) / static_cast<double>(s.exact[i].second);
    }
    return s;
  }();
  return scheme;
}

double skeletal_variation(const SmoothFunction& f, const JointSample& js, double t, int order) {
  const std::size_t steps = steps_for_horizon(js.level, t);
  if (steps == 0) return 0.0;
  const auto z = skeletal_z_values(*js.x, js.skeleton, steps);
  return symmetric_variation_direct(f, z, order);
}

double ito_residual(const SmoothFunction& f, const JointSample& js, double t) {
  const double v = skeletal_variation(f.derivative_function(1), js, t, 1);
  const double zt = evaluate_z(*js.x, js.y->value_at(t));
  return f(zt) - f(0.0) - v;
}

double correction_integral(const SmoothFunction& f, const FbmPath& x, const FbmPath& w, double y_end,
                           double kappa3) {
  if (x.hurst().regime() != HurstParameter::Regime::critical)
    throw std::invalid_argument("the corrective integral is defined for H = 1/6 only");
  if (x.spacing() != w.spacing() || x.half_extent() != w.half_extent())
    throw std::invalid_argument("X and W must share one grid");
  const std::int64_t end = x.nearest_index(y_end);
  const std::int64_t dir = end < 0 ? -1 : 1;
  const std::int64_t n = end < 0 ? -end : end;
  CompensatedSum sum;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t a = dir * i;
    const std::int64_t b = dir * (i + 1);
    sum += f.derivative(3, x.at(a)) * (w.at(b) - w.at(a));
  }
  return kappa3 / 12.0 * sum.value();
}

double correction_integral(const SmoothFunction& f, const JointSample& js, double t, double kappa3) {
  if (!js.w) throw std::invalid_argument("joint sample has no noise path W");
  return correction_integral(f, *js.x, *js.w, js.y->value_at(t), kappa3);
}

double skeletal_abs_power_sum(const FbmPath& x, const SkeletalStructure& skeleton, std::size_t steps, int power) {
  const auto z = skeletal_z_values(x, skeleton, steps);
  CompensatedSum sum;
  for (std::size_t k = 0; k + 1 < z.size(); ++k) sum += std::pow(std::abs(z[k + 1] - z[k]), power);
  return sum.value();
}

TaylorAssembly taylor_assembly(const SmoothFunction& f, std::span<const double> z) {
  const TaylorScheme& scheme = taylor_coefficients();
  TaylorAssembly out;
  CompensatedSum total;
  for (int r = 1; r <= 7; ++r) {
    const int k = 2 * r - 1;
    const double v = symmetric_variation_direct(f.derivative_function(k), z, k);
    out.variations[static_cast<std::size_t>(r - 1)] = v;
    total += 2.0 * scheme.coefficient(r) * v;
  }
  out.total = total.value();
  return out;
}

}  // namespace fbmbt
