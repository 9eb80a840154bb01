#include "prosyn/rng.hpp"

#include <algorithm>
#include <cmath>

namespace prosyn {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix_u64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) {
  // FNV-1a 64.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) {
    x = mix_u64(x);
    s = x;
  }
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  // Rejection below the largest multiple of n, so the modulo is unbiased.
  const std::uint64_t threshold = (0ULL - n) % n;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RngStream::gamma(double shape) {
  if (shape < 1.0) {
    // Boost: X ~ Gamma(a+1), U^(1/a) * X ~ Gamma(a). 1-u keeps u > 0.
    const double u = 1.0 - uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

RngStream RngStream::substream(std::string_view label) const {
  return RngStream(mix_u64(seed_ ^ hash_label(label)));
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(mix_u64(seed_ ^ mix_u64(index)));
}

std::size_t categorical_draw(std::span<const double> cumulative,
                             RngStream& rng) {
  const double u = rng.uniform01() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
  return std::min(idx, cumulative.size() - 1);
}

}  // namespace prosyn
