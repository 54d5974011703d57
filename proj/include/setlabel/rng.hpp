#pragma once
// Seeded RNG streams. Every source of randomness in the library takes an
// explicit RngSpec or Rng; child streams are derived deterministically so
// results are byte-identical regardless of thread count or execution order.
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace setlabel {

// splitmix64 finalizer, used only for deriving child-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Identifies one reproducible random stream. Equal specs produce equal
// streams; child(id) folds the current identity into a fresh master so
// derivation can be nested (per repetition, per resample, ...).
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  std::uint64_t mixed() const {
    return splitmix64(splitmix64(master_seed) ^
                      splitmix64(stream_id * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
  }
  RngSpec child(std::uint64_t id) const { return RngSpec{mixed(), id}; }
  bool operator==(const RngSpec&) const = default;
};

// mt19937_64 with hand-rolled distributions. std:: distribution objects are
// not bit-stable across standard libraries, so we implement the few we need.
class Rng {
 public:
  explicit Rng(RngSpec spec) : eng_(spec.mixed()) {}
  explicit Rng(std::uint64_t seed) : eng_(RngSpec{seed, 0}.mixed()) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe for log().
  double uniform01_open0() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller (cosine branch); consumes exactly two draws per call.
  double normal(double mean = 0.0, double sd = 1.0) {
    const double u1 = uniform01_open0();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n) via 128-bit multiply (bias < 2^-64).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

  // Fisher-Yates; consumes v.size()-1 draws.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Poisson(lambda) quantile: smallest k with F(k) >= u.
inline long poisson_quantile(double u, double lambda) {
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  long k = 0;
  while (cdf < u && k < 400) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    cdf += pmf;
    if (pmf == 0.0) break;  // accumulated everything double can represent
  }
  return k;
}

}  // namespace setlabel
