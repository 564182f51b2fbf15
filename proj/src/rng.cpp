#include "sampling/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sampling {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stafford variant 13 of the MurmurHash3/SplitMix64 finalizer.
constexpr std::uint64_t fmix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_id) {
  return fmix64(seed + kGolden) ^ fmix64(stream_id * kGolden + 0x6A09E667F3BCC909ULL);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(stream_key(seed, stream_id)) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return fmix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::standard_normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  // 1 - u1 lies in (0, 1], keeping the log finite.
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::normal(double mean, double sd) {
  return mean + sd * standard_normal();
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t range =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next_u64());  // full span
  const std::uint64_t mask = range <= 1 ? 0 : ~std::uint64_t{0} >> std::countl_zero(range - 1);
  for (;;) {
    const std::uint64_t v = next_u64() & mask;
    if (v < range) return lo + static_cast<std::int64_t>(v);
  }
}

RngStream RngStream::split(std::uint64_t child_id) const {
  return RngStream(seed_, fmix64(stream_id_ * kGolden + child_id + 1));
}

}  // namespace sampling
