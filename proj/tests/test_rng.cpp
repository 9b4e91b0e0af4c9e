#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "elliptope/rng.hpp"

using elliptope::Rng;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int k = 0; k < 1000; ++k) REQUIRE(a.next_u64() == b.next_u64());
  Rng c(42), d(42);
  for (int k = 0; k < 100; ++k) {
    REQUIRE(c.normal() == d.normal());
    REQUIRE(c.gamma(1.7) == d.gamma(1.7));
    REQUIRE(c.beta(0.5, 2.0) == d.beta(0.5, 2.0));
  }
}

TEST_CASE("substreams with different keys diverge") {
  Rng a = Rng::substream(7, 1, 0);
  Rng b = Rng::substream(7, 2, 0);
  Rng c = Rng::substream(7, 1, 1);
  int equal_ab = 0, equal_ac = 0;
  for (int k = 0; k < 64; ++k) {
    Rng a2 = Rng::substream(7, 1, 0);
    (void)a2;
    if (a.next_u64() == b.next_u64()) ++equal_ab;
    if (a.next_u64() == c.next_u64()) ++equal_ac;
  }
  REQUIRE(equal_ab == 0);
  REQUIRE(equal_ac == 0);
  // same key twice is the same stream
  Rng d = Rng::substream(7, 3, 4);
  Rng e = Rng::substream(7, 3, 4);
  for (int k = 0; k < 64; ++k) REQUIRE(d.next_u64() == e.next_u64());
}

TEST_CASE("uniform stays in [0,1) and has the right mean") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  REQUIRE(std::fabs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal deviates match first two moments") {
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  REQUIRE(std::fabs(mean) < 4.0 / std::sqrt(double(n)));
  REQUIRE(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("gamma deviates match mean and variance") {
  Rng rng(3);
  const int n = 200000;
  for (double shape : {0.5, 1.0, 2.5, 7.0}) {
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = rng.gamma(shape);
      REQUIRE(x >= 0.0);
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // mean = shape, var = shape; generous 5-sigma-ish brackets
    REQUIRE(std::fabs(mean - shape) < 5.0 * std::sqrt(shape / n));
    REQUIRE(std::fabs(var - shape) < 0.05 * shape + 5.0 * std::sqrt(shape) / std::sqrt(double(n)));
  }
}

TEST_CASE("beta deviates match the Beta mean") {
  Rng rng(4);
  const int n = 200000;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.5, 2.5}, {0.5, 0.5}}) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = rng.beta(a, b);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
      sum += x;
    }
    const double mean = a / (a + b);
    const double sd = std::sqrt(mean * (1.0 - mean) / n);  // upper bound on Beta sd
    REQUIRE(std::fabs(sum / n - mean) < 5.0 * sd);
  }
}
