#pragma once

#include <cstdint>

namespace pmolb {

// Counter-based SplitMix64 stream. Every draw is addressable by its absolute
// position in the stream, so the epoch kernel can evaluate rounds out of
// order and still reproduce the sequential draw sequence bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t value_at(std::uint64_t pos) const {
    std::uint64_t z = seed_ + (pos + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]. Strictly positive so inverse-CDF sampling can never
  // land on a zero-weight action.
  double open01_at(std::uint64_t pos) const {
    return 1.0 - static_cast<double>(value_at(pos) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return value_at(counter_++); }
  double next_open01() { return open01_at(counter_++); }

  std::uint64_t position() const { return counter_; }
  void skip(std::uint64_t n) { counter_ += n; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace pmolb
