#ifndef PROSYN_RNG_HPP
#define PROSYN_RNG_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace prosyn {

// Deterministic random stream (xoshiro256** core). All sampling in the
// library goes through this instead of <random> distributions so that a
// given seed reproduces the same draws on every platform and toolchain.
//
// Substreams are derived from the stream's creation seed, not from its
// consumption state: substream("a") yields the same stream no matter how
// much the parent has already been used. This keeps per-feature and
// per-prosumer streams independent of each other and of iteration order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  // Standard normal (Marsaglia polar method).
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang, with the shape < 1 boost.
  double gamma(double shape);

  RngStream substream(std::string_view label) const;
  RngStream substream(std::uint64_t index) const;

  // Fisher-Yates; std::shuffle is implementation-defined, this is not.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; also used to derive substream seeds and file hashes.
std::uint64_t mix_u64(std::uint64_t x);
std::uint64_t hash_label(std::string_view label);

// Index draw from a vector of cumulative weights (last entry = total mass).
std::size_t categorical_draw(std::span<const double> cumulative,
                             RngStream& rng);

}  // namespace prosyn

#endif
