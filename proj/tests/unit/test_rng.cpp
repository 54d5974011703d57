#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "setlabel/rng.hpp"

using namespace setlabel;

TEST_CASE("equal specs produce equal streams") {
  Rng a(RngSpec{33, 7});
  Rng b(RngSpec{33, 7});
  for (int i = 0; i < 10000; ++i) REQUIRE(a.bits() == b.bits());
}

TEST_CASE("distinct stream ids diverge") {
  Rng a(RngSpec{33, 0});
  Rng b(RngSpec{33, 1});
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += a.bits() == b.bits();
  CHECK(equal == 0);
}

TEST_CASE("child streams are deterministic and distinct") {
  const RngSpec root{5, 0};
  CHECK(root.child(3).mixed() == root.child(3).mixed());
  CHECK(root.child(3).mixed() != root.child(4).mixed());
  // Nested derivation also stable.
  CHECK(root.child(1).child(2).mixed() == root.child(1).child(2).mixed());
}

TEST_CASE("uniform01 range and moments") {
  Rng rng(RngSpec{11, 0});
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.03));
}

TEST_CASE("uniform01_open0 never returns zero") {
  Rng rng(RngSpec{12, 0});
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01_open0();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("normal moments") {
  Rng rng(RngSpec{13, 0});
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("below(n) is in range and uniform (chi-square)") {
  Rng rng(RngSpec{14, 0});
  const std::uint64_t k = 7;
  const int n = 100000;
  std::vector<long> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = rng.below(k);
    REQUIRE(v < k);
    ++counts[v];
  }
  const double expect = static_cast<double>(n) / static_cast<double>(k);
  double chi2 = 0;
  for (long c : counts) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 22.4577);  // chi-square(6 df) at the 0.1% level
}

TEST_CASE("bernoulli frequency") {
  Rng rng(RngSpec{15, 0});
  const int n = 100000;
  long ones = 0;
  for (int i = 0; i < n; ++i) ones += rng.bernoulli(0.3) ? 1 : 0;
  CHECK(static_cast<double>(ones) / n == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("shuffle is a permutation and deterministic") {
  std::vector<int> v(257);
  std::iota(v.begin(), v.end(), 0);
  Rng rng(RngSpec{16, 0});
  auto a = v;
  rng.shuffle(a);
  CHECK(a != v);  // 257! to 1 odds against identity
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == v);

  auto b = v;
  Rng rng2(RngSpec{16, 0});
  rng2.shuffle(b);
  CHECK(a == b);
}

TEST_CASE("normal_cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-9));
  CHECK(normal_cdf(-1.96) == doctest::Approx(1.0 - 0.9750021048517795).epsilon(1e-9));
  CHECK(normal_cdf(5.0) > 0.999999);
}

TEST_CASE("poisson_quantile against Poisson(3) CDF") {
  // CDF(0..4) = 0.04979, 0.19915, 0.42319, 0.64723, 0.81526.
  CHECK(poisson_quantile(0.01, 3.0) == 0);
  CHECK(poisson_quantile(0.10, 3.0) == 1);
  CHECK(poisson_quantile(0.40, 3.0) == 2);
  CHECK(poisson_quantile(0.50, 3.0) == 3);
  CHECK(poisson_quantile(0.64, 3.0) == 3);
  CHECK(poisson_quantile(0.65, 3.0) == 4);
  CHECK(poisson_quantile(0.9999999, 3.0) >= 10);
}

TEST_CASE("uniform(a,b) stays inside the interval") {
  Rng rng(RngSpec{17, 0});
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.5, 4.0);
    REQUIRE(u >= -2.5);
    REQUIRE(u < 4.0);
  }
}
