#include <doctest.h>

#include <cmath>
#include <vector>

#include "crossed/rng.hpp"

using crossed::Rng;

TEST_CASE("rng streams are deterministic given the seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff = false;
  for (int k = 0; k < 1000; ++k) {
    const auto x = a.next_u64();
    all_equal = all_equal && x == b.next_u64();
    any_diff = any_diff || x != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform stays in [0, 1) and uniform_pos in (0, 1]") {
  Rng rng(7);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  Rng rng2(7);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng2.uniform_pos();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("normal moments") {
  Rng rng(123);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("gamma moments, including shape below one") {
  Rng rng(456);
  const int n = 200000;

  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += rng.gamma(2.0, 3.0);
  CHECK(std::abs(sum / n - 2.0 / 3.0) < 0.01);

  sum = 0.0;
  for (int k = 0; k < n; ++k) sum += rng.gamma(0.5, 1.0);
  CHECK(std::abs(sum / n - 0.5) < 0.01);

  CHECK_THROWS(rng.gamma(0.0, 1.0));
  CHECK_THROWS(rng.gamma(1.0, -1.0));
}

TEST_CASE("derive_seed separates labels and masters") {
  const auto a = crossed::derive_seed(1, "pattern");
  const auto b = crossed::derive_seed(1, "z");
  const auto c = crossed::derive_seed(2, "pattern");
  CHECK(a != b);
  CHECK(a != c);
  CHECK(a == crossed::derive_seed(1, "pattern"));
}
