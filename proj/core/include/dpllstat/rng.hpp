// Seeded RNG with portable, implementation-independent sampling.
//
// std::mt19937_64 is fully specified by the standard; the distribution
// helpers below are hand-rolled so that a given seed produces the same
// stream on every platform (std::uniform_int_distribution is not portable).

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dpllstat {

// SplitMix64 step, used to mix seeds and derive per-run streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream derivation contract: derived = mix(mix(mix(master) ^ cell) ^ run).
// Deterministic and collision-resistant enough for independent MC streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell_id,
                                 std::uint64_t run_index) {
  return splitmix64(splitmix64(splitmix64(master) ^ cell_id) ^ run_index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return unit() < p;
  }

  bool coin() { return (gen_() & 1u) != 0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dpllstat
