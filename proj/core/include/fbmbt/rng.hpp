#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace fbmbt {

/// Stream tags. Every random object in a replica draws from its own tag so
/// X, Y, W and the auxiliary draws are independent by construction.
enum class StreamTag : std::uint32_t {
  fbm = 1,
  brownian = 2,
  noise = 3,
  bridge = 4,
  walk = 5,
  exit_time = 6,
  endpoint = 7,
};

/// Identity of a random stream: (master seed, replica index, stream tag,
/// sub-stream). Two records that differ in any field give independent
/// streams; equal records give bit-identical streams regardless of which
/// worker thread consumes them.
struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t replica = 0;
  std::uint32_t stream = 0;
  std::uint32_t substream = 0;

  static constexpr const char* kGenerator = "mt19937_64+seed_seq";
  static constexpr const char* kGaussian = "inverse-cdf";

  [[nodiscard]] SeedRecord with_stream(StreamTag tag) const {
    return {master, replica, static_cast<std::uint32_t>(tag), substream};
  }
  [[nodiscard]] SeedRecord with_substream(std::uint32_t sub) const {
    return {master, replica, stream, sub};
  }

  friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

[[nodiscard]] SeedRecord make_seed(std::uint64_t master, std::uint64_t replica, StreamTag tag);

/// Uniform, Gaussian and coin draws from one keyed stream.
/// Gaussians are produced by inverting the normal CDF on an open-interval
/// uniform, so one Gaussian consumes exactly one 64-bit word.
class RandomStream {
 public:
  explicit RandomStream(const SeedRecord& key);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  std::uint64_t bits() { return engine_(); }

  [[nodiscard]] const SeedRecord& key() const { return key_; }

 private:
  SeedRecord key_;
  std::mt19937_64 engine_;
};

/// Standard normal quantile function, p in (0, 1).
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace fbmbt
