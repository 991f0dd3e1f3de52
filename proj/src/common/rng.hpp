#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace occbench {

/// 64-bit FNV-1a over raw bytes.
uint64_t fnv1a64(const void* data, size_t size, uint64_t basis = 0xcbf29ce484222325ULL);
inline uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

/// SplitMix64 finalizer; a bijection on 64-bit values.
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hierarchical random key. Child keys are derived by hashing a tag or an
/// index into the parent, so every consumer gets its own independent stream
/// regardless of evaluation order or thread scheduling.
class RngKey {
public:
  constexpr RngKey() = default;
  constexpr explicit RngKey(uint64_t v) : value_(v) {}

  constexpr uint64_t value() const { return value_; }

  RngKey derive(std::string_view tag) const { return RngKey(mix64(value_ ^ mix64(fnv1a64(tag)))); }
  constexpr RngKey derive(uint64_t index) const { return RngKey(mix64(mix64(value_) + index)); }

  friend constexpr bool operator==(RngKey a, RngKey b) { return a.value_ == b.value_; }

private:
  uint64_t value_ = 0;
};

/// Portable random stream. std::mt19937_64 output is fully specified by the
/// standard; the distribution helpers below are written out so results do not
/// depend on the standard library implementation.
class Rng {
public:
  explicit Rng(RngKey key) : engine_(mix64(key.value())) {}

  uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer on [0, n); n must be > 0.
  uint64_t below(uint64_t n);

  /// Uniform integer on [lo, hi] inclusive.
  int64_t between(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 engine_;
};

}  // namespace occbench
