#ifndef SCENRED_RNG_HPP
#define SCENRED_RNG_HPP

#include <cstdint>
#include <random>

namespace scenred {

/// Portable stream on top of std::mt19937_64, whose output sequence the
/// standard fixes. Conversions are done here rather than with the
/// implementation-defined std distributions:
///   uniform01:  (next() >> 11) * 2^-53
///   below(n):   rejection sampling on the top bits, unbiased
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  /// Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform on {lo, ..., hi}.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer of (seed, index): seed for the index-th substream.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace scenred

#endif  // SCENRED_RNG_HPP
