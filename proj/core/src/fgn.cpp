#include "fbmbt/fgn.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "fbmbt/errors.hpp"

namespace fbmbt {

namespace {

// FFTW planning is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

HurstParameter::HurstParameter(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw std::invalid_argument("Hurst parameter must lie in the open interval (0,1), got " +
                                std::to_string(value));
  }
}

HurstParameter::Regime HurstParameter::regime() const noexcept {
  if (std::abs(value_ - kCritical) <= kCriticalTolerance) return Regime::critical;
  return value_ < kCritical ? Regime::subcritical : Regime::supercritical;
}

const char* to_string(HurstParameter::Regime regime) {
  switch (regime) {
    case HurstParameter::Regime::subcritical:
      return "subcritical";
    case HurstParameter::Regime::critical:
      return "critical";
    case HurstParameter::Regime::supercritical:
      return "supercritical";
  }
  return "unknown";
}

FbmPath::FbmPath(HurstParameter hurst, double spacing, std::int64_t half_extent, std::vector<double> values,
                 SeedRecord seed)
    : hurst_(hurst), spacing_(spacing), half_extent_(half_extent), values_(std::move(values)), seed_(seed) {
  if (!(spacing > 0.0)) throw std::invalid_argument("FbmPath: spacing must be positive");
  if (half_extent < 1) throw std::invalid_argument("FbmPath: half extent must be at least 1");
  if (values_.size() != static_cast<std::size_t>(2 * half_extent + 1)) {
    throw std::invalid_argument("FbmPath: expected 2M+1 values");
  }
  if (values_[static_cast<std::size_t>(half_extent)] != 0.0) {
    throw std::invalid_argument("FbmPath: value at time 0 must be exactly 0");
  }
}

std::int64_t FbmPath::nearest_index(double t) const {
  const double scaled = std::nearbyint(t / spacing_);
  if (std::abs(scaled) > static_cast<double>(half_extent_)) {
    throw ExtentError("fBm grid covers |t| <= " + std::to_string(max_time()) + ", requested t = " +
                          std::to_string(t),
                      std::abs(t));
  }
  return static_cast<std::int64_t>(scaled);
}

BmPath::BmPath(double spacing, std::vector<double> values, SeedRecord seed)
    : spacing_(spacing), values_(std::move(values)), seed_(seed) {
  if (!(spacing > 0.0)) throw std::invalid_argument("BmPath: spacing must be positive");
  if (values_.size() < 2) throw std::invalid_argument("BmPath: need at least one step");
  if (values_.front() != 0.0) throw std::invalid_argument("BmPath: path must start at 0");
}

double BmPath::value_at(double t) const {
  if (t < 0.0) throw std::invalid_argument("BmPath: negative time");
  const double scaled = std::nearbyint(t / spacing_);
  if (scaled > static_cast<double>(values_.size() - 1)) {
    throw ExtentError("Brownian path horizon " + std::to_string(horizon()) + " < requested " + std::to_string(t),
                      t);
  }
  return values_[static_cast<std::size_t>(scaled)];
}

double fbm_covariance(double t, double s, HurstParameter hurst) {
  const double two_h = 2.0 * hurst.value();
  return 0.5 * (std::pow(std::abs(s), two_h) + std::pow(std::abs(t), two_h) - std::pow(std::abs(t - s), two_h));
}

double increment_autocovariance(std::int64_t q, HurstParameter hurst) {
  const double two_h = 2.0 * hurst.value();
  const double aq = static_cast<double>(q < 0 ? -q : q);
  if (aq < 2.0) {
    return 0.5 * (std::pow(aq + 1.0, two_h) + std::pow(std::abs(aq - 1.0), two_h) - 2.0 * std::pow(aq, two_h));
  }
  // |q| >= 2: q^{2H} sum_k binom(2H, 2k) q^{-2k}, free of the cancellation
  // between three nearly equal powers.
  const double x2 = 1.0 / (aq * aq);
  double binom = 1.0;
  double power = 1.0;
  double sum = 0.0;
  for (int m = 1; m <= 199; m += 2) {
    binom *= (two_h - m + 1) / m;
    binom *= (two_h - m) / (m + 1);
    power *= x2;
    const double term = binom * power;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return std::pow(aq, two_h) * sum;
}

struct FbmSampler::Impl {
  SamplerMethod method = SamplerMethod::circulant;
  double min_ratio = 1.0;
  std::int64_t increments = 0;

  // circulant route
  std::size_t embed_size = 0;
  std::vector<double> amplitude;  // length embed_size/2 + 1
  fftw_plan plan = nullptr;

  // cholesky route
  Eigen::MatrixXd lower;

  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FbmSampler::FbmSampler(HurstParameter hurst, double spacing, std::int64_t half_extent, SamplerMethod method)
    : hurst_(hurst), spacing_(spacing), half_extent_(half_extent), impl_(std::make_unique<Impl>()) {
  if (!(spacing > 0.0)) throw std::invalid_argument("fBm sampler: spacing must be positive");
  if (half_extent < 1) throw std::invalid_argument("fBm sampler: half extent must be at least 1");

  const std::int64_t n = 2 * half_extent;
  impl_->increments = n;
  const double scale2 = std::pow(spacing, 2.0 * hurst.value());

  bool use_cholesky = method == SamplerMethod::cholesky;
  if (!use_cholesky) {
    const auto embed = static_cast<std::size_t>(2 * n);
    auto row = fftw_buffer<double>(embed);
    auto spectrum = fftw_buffer<fftw_complex>(embed / 2 + 1);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
      row[k] = increment_autocovariance(static_cast<std::int64_t>(k), hurst);
    }
    for (std::size_t k = static_cast<std::size_t>(n) + 1; k < embed; ++k) row[k] = row[embed - k];

    fftw_plan eig_plan;
    {
      std::lock_guard lock(planner_mutex());
      eig_plan = fftw_plan_dft_r2c_1d(static_cast<int>(embed), row.get(), spectrum.get(), FFTW_ESTIMATE);
    }
    fftw_execute(eig_plan);
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(eig_plan);
    }

    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::size_t k = 0; k <= embed / 2; ++k) {
      max_eig = std::max(max_eig, spectrum[k][0]);
      min_eig = std::min(min_eig, spectrum[k][0]);
    }
    impl_->min_ratio = min_eig / max_eig;

    if (min_eig < -1e-8 * max_eig) {
      if (method == SamplerMethod::circulant || n > kCholeskyLimit) {
        throw EmbeddingError("circulant embedding spectrum is negative (min/max = " +
                             std::to_string(impl_->min_ratio) + ") and the grid is too large for Cholesky");
      }
      use_cholesky = true;
    } else {
      impl_->method = SamplerMethod::circulant;
      impl_->embed_size = embed;
      impl_->amplitude.resize(embed / 2 + 1);
      const double len = static_cast<double>(embed);
      for (std::size_t k = 0; k <= embed / 2; ++k) {
        const double lam = std::max(spectrum[k][0], 0.0) * scale2;
        const bool real_mode = (k == 0 || k == embed / 2);
        impl_->amplitude[k] = std::sqrt(lam / (real_mode ? len : 2.0 * len));
      }
      auto in = fftw_buffer<fftw_complex>(embed / 2 + 1);
      auto out = fftw_buffer<double>(embed);
      std::lock_guard lock(planner_mutex());
      impl_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(embed), in.get(), out.get(), FFTW_ESTIMATE);
    }
  }

  if (use_cholesky) {
    if (n > kCholeskyLimit) {
      throw EmbeddingError("Cholesky sampling limited to " + std::to_string(kCholeskyLimit) + " increments");
    }
    Eigen::MatrixXd cov(n, n);
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) cov(i, j) = scale2 * increment_autocovariance(i - j, hurst);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw EmbeddingError("increment covariance is not positive definite");
    impl_->lower = llt.matrixL();
    impl_->method = SamplerMethod::cholesky;
    if (method == SamplerMethod::cholesky) impl_->min_ratio = 1.0;
  }
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

SamplerMethod FbmSampler::method() const noexcept { return impl_->method; }
double FbmSampler::min_eigenvalue_ratio() const noexcept { return impl_->min_ratio; }

FbmPath FbmSampler::sample(const SeedRecord& seed) const {
  RandomStream rng(seed);
  const auto n = static_cast<std::size_t>(impl_->increments);
  std::vector<double> increments(n);

  if (impl_->method == SamplerMethod::circulant) {
    const std::size_t embed = impl_->embed_size;
    const std::size_t half = embed / 2;
    auto in = fftw_buffer<fftw_complex>(half + 1);
    auto out = fftw_buffer<double>(embed);
    in[0][0] = impl_->amplitude[0] * rng.normal();
    in[0][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
      in[k][0] = impl_->amplitude[k] * rng.normal();
      in[k][1] = impl_->amplitude[k] * rng.normal();
    }
    in[half][0] = impl_->amplitude[half] * rng.normal();
    in[half][1] = 0.0;
    fftw_execute_dft_c2r(impl_->plan, in.get(), out.get());
    std::copy(out.get(), out.get() + n, increments.begin());
  } else {
    Eigen::VectorXd xi(static_cast<Eigen::Index>(n));
    for (auto& v : xi) v = rng.normal();
    const Eigen::VectorXd inc = impl_->lower * xi;
    std::copy(inc.begin(), inc.end(), increments.begin());
  }

  // Accumulate outward from the origin so the centre value is exactly zero.
  const auto m = static_cast<std::size_t>(half_extent_);
  std::vector<double> values(2 * m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) values[m + i + 1] = values[m + i] + increments[m + i];
  for (std::size_t i = 0; i < m; ++i) values[m - i - 1] = values[m - i] - increments[m - i - 1];

  return FbmPath(hurst_, spacing_, half_extent_, std::move(values), seed);
}

FbmPath sample_fbm_two_sided(HurstParameter hurst, double spacing, std::int64_t half_extent,
                             const SeedRecord& seed) {
  return FbmSampler(hurst, spacing, half_extent).sample(seed);
}

BmPath sample_bm(double horizon, double spacing, const SeedRecord& seed) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sample_bm: horizon must be positive");
  if (!(spacing > 0.0)) throw std::invalid_argument("sample_bm: spacing must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / spacing - 1e-9));
  RandomStream rng(seed);
  const double sd = std::sqrt(spacing);
  std::vector<double> values(std::max<std::size_t>(steps, 1) + 1, 0.0);
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = values[i - 1] + sd * rng.normal();
  return BmPath(spacing, std::move(values), seed);
}

}  // namespace fbmbt
