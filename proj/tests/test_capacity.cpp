#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "flashmod/bits.hpp"
#include "flashmod/capacity.hpp"

using namespace flashmod;

namespace {

// Counts binary strings of length n with ones at least d+1 apart and no run
// of more than k zeros, by checking every string.
std::uint64_t brute_count(int n, int d, int k) {
  std::uint64_t count = 0;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    int zeros = 0;
    int since_one = -1;  // -1: no one seen yet
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if ((v >> i) & 1u) {
        if (since_one >= 0 && since_one < d) ok = false;
        since_one = 0;
        zeros = 0;
      } else {
        if (since_one >= 0) ++since_one;
        if (++zeros > k) ok = false;
      }
    }
    count += ok;
  }
  return count;
}

// E-PH-free q-ary strings of length n, by dynamic programming over the last symbol.
double dp_count(int q, int n) {
  std::vector<double> last(static_cast<std::size_t>(q), 1.0);
  for (int i = 1; i < n; ++i) {
    std::vector<double> next(static_cast<std::size_t>(q), 0.0);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        if (!((a == 0 && b == q - 1) || (a == q - 1 && b == 0))) next[b] += last[a];
    last = next;
  }
  double total = 0;
  for (double v : last) total += v;
  return total;
}

// Largest root of x^2 - (q-1)x - (q-2), from the symmetric eigenvector (a, b, ..., b, a).
double closed_form_lambda(int q) {
  const double b = q - 1.0;
  return 0.5 * (b + std::sqrt(b * b + 4.0 * (q - 2.0)));
}

}  // namespace

TEST(RllCapacity, DOneUnbounded) {
  const auto r = rll_capacity({1, std::nullopt});
  EXPECT_NEAR(r.capacity, 0.6942, 5e-4);
  // golden ratio
  EXPECT_NEAR(r.lambda_max, (1.0 + std::sqrt(5.0)) / 2.0, 1e-9);
  EXPECT_NEAR(r.capacity, std::log2((1.0 + std::sqrt(5.0)) / 2.0), 1e-6);
}

TEST(RllCapacity, Unconstrained) {
  EXPECT_NEAR(rll_capacity({0, std::nullopt}).capacity, 1.0, 1e-9);
}

TEST(RllCapacity, OneSevenAgainstBruteForce) {
  const double slope = std::log2(static_cast<double>(brute_count(24, 1, 7))) -
                       std::log2(static_cast<double>(brute_count(23, 1, 7)));
  const double c = rll_capacity({1, 7}).capacity;
  EXPECT_NEAR(c, slope, 0.01);
  EXPECT_LT(c, rll_capacity({1, std::nullopt}).capacity);
  EXPECT_GT(c, 2.0 / 3.0);
}

TEST(RllCapacity, Deterministic) {
  EXPECT_EQ(rll_capacity({1, 7}).capacity, rll_capacity({1, 7}).capacity);
}

TEST(DominantEigenvalue, SmallKnownMatrices) {
  SquareMatrix a(2, 0);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 2;
  EXPECT_NEAR(dominant_eigenvalue(a).eigenvalue, 3.0, 1e-9);
  SquareMatrix id(3, 0);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1;
  EXPECT_NEAR(dominant_eigenvalue(id).eigenvalue, 1.0, 1e-12);
}

TEST(TransitionSpec, FourLevelMatrix) {
  const auto s = build_transition_spec(2);
  ASSERT_EQ(s.matrix.size(), 4u);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      EXPECT_EQ(s.matrix(r, c), ((r == 0 && c == 3) || (r == 3 && c == 0)) ? 0 : 1);
}

TEST(TransitionSpec, SlcIsIdentity) {
  const auto s = build_transition_spec(1);
  EXPECT_EQ(s.matrix(0, 0), 1);
  EXPECT_EQ(s.matrix(0, 1), 0);
  EXPECT_EQ(s.matrix(1, 0), 0);
  EXPECT_EQ(s.matrix(1, 1), 1);
  const auto c = mary_capacity(s);
  EXPECT_NEAR(c.lambda_max, 1.0, 1e-12);
  EXPECT_NEAR(c.capacity, 0.0, 1e-12);
}

TEST(TransitionSpec, EightLevels) {
  const auto s = build_transition_spec(3);
  int zeros = 0;
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) zeros += s.matrix(r, c) == 0;
  EXPECT_EQ(zeros, 2);
  EXPECT_EQ(s.matrix(0, 7), 0);
  EXPECT_EQ(s.matrix(7, 0), 0);
}

TEST(TransitionSpec, OutOfRange) {
  EXPECT_THROW(build_transition_spec(0), RangeError);
  EXPECT_THROW(build_transition_spec(5), RangeError);
}

TEST(MaryCapacity, KnownValues) {
  const auto c2 = mary_capacity(build_transition_spec(2));
  EXPECT_NEAR(c2.lambda_max, 3.5616, 1e-3);
  EXPECT_NEAR(c2.capacity, 0.9163, 1e-3);
  EXPECT_NEAR(mary_capacity(build_transition_spec(3)).capacity, 0.9861, 1e-3);
  EXPECT_NEAR(mary_capacity(build_transition_spec(4)).capacity, 0.9973, 1e-3);
}

TEST(MaryCapacity, MatchesClosedForm) {
  for (int m = 2; m <= 4; ++m) {
    const auto c = mary_capacity(build_transition_spec(m));
    const double lambda = closed_form_lambda(1 << m);
    EXPECT_NEAR(c.lambda_max, lambda, 1e-8 * lambda) << m;
    EXPECT_NEAR(c.capacity, std::log2(lambda) / m, 1e-9) << m;
  }
}

TEST(MaryCapacity, GrowthRateOfCountedStrings) {
  for (int m = 2; m <= 4; ++m) {
    const double ratio = dp_count(1 << m, 20) / dp_count(1 << m, 19);
    EXPECT_NEAR(mary_capacity(build_transition_spec(m)).lambda_max, ratio, 1e-3) << m;
  }
}
