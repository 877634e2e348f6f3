#pragma once

#include <cstdint>

namespace swarminfer {

// Deterministic splitmix64 stream. Seeded generation must reproduce
// bit-identical output across runs and platforms (the CLI contract), so we
// do not rely on std::uniform_*_distribution, whose algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, n), n > 0. Multiply-shift; the O(2^-64) bias is irrelevant
  // here and the result is deterministic.
  std::uint64_t below(std::uint64_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
  }

  // Inclusive range.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  // Independent substream. Callers must use distinct salts per fork.
  Rng fork(std::uint64_t salt) const {
    Rng child(state_ ^ (0x632be59bd9b4e019ull * (salt + 0x9e3779b97f4a7c15ull)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace swarminfer
