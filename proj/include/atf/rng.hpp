#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace atf {

// Deterministic, platform-independent randomness. Standard-library
// distributions are implementation-defined, so every stochastic stage draws
// through this generator instead; identical seeds give identical streams on
// any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // SplitMix64 step.
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal();

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives a stage seed from the master seed and a stage tag, e.g.
// derive_seed(seed, "generate/size=25/cloud=17"). FNV-1a over the tag mixed
// into the master through one SplitMix64 round.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

}  // namespace atf
