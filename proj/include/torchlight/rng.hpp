#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace torchlight {

// Seed mixing for deriving independent streams (restarts, iterations,
// parallel runs) from one user-facing seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~salt));
}

// mt19937_64 is fully specified by the standard; the std distributions are
// not, so uniform draws are mapped by hand to keep results reproducible
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

  bool coin() { return (gen_() & 1u) != 0; }

  std::uint64_t raw() { return gen_(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(below(i + 1))]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace torchlight
