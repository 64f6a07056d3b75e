#include "fbmbt/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <stdexcept>

namespace fbmbt {

SeedRecord make_seed(std::uint64_t master, std::uint64_t replica, StreamTag tag) {
  return SeedRecord{master, replica, static_cast<std::uint32_t>(tag), 0};
}

namespace {

std::mt19937_64 keyed_engine(const SeedRecord& key) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(key.master & 0xffffffffu),
      static_cast<std::uint32_t>(key.master >> 32),
      static_cast<std::uint32_t>(key.replica & 0xffffffffu),
      static_cast<std::uint32_t>(key.replica >> 32),
      key.stream,
      key.substream,
  };
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(const SeedRecord& key) : key_(key), engine_(keyed_engine(key)) {}

double RandomStream::uniform() {
  // 53 random bits centred in their cell: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_quantile(uniform()); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: probability must lie in (0, 1)");
  }
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace fbmbt
