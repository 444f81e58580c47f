#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "flashmod/epattern.hpp"

using namespace flashmod;

namespace {

StateGrid random_grid(int m, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Level> lv(rows * cols);
  for (auto& l : lv) l = static_cast<Level>(rng() % (1u << m));
  return StateGrid(m, rows, cols, lv);
}

}  // namespace

TEST(ClassifyVictim, AllNeighboursPh) {
  StateGrid g(1, 3, 3, std::vector<Level>(9, 1));
  g.set(1, 1, 0);
  const auto pc = classify_victim(g, 1, 1);
  ASSERT_TRUE(pc);
  EXPECT_EQ(*pc, (PatternClass{2, 2, 4}));
}

TEST(ClassifyVictim, AllNeighboursE) {
  const StateGrid g(2, 3, 3);
  EXPECT_EQ(*classify_victim(g, 1, 1), (PatternClass{0, 0, 0}));
}

TEST(ClassifyVictim, IsolatedE) {
  const auto g = StateGrid::single_row(1, {1, 0, 1});
  EXPECT_EQ(*classify_victim(g, 0, 1), (PatternClass{2, 0, 0}));
  EXPECT_FALSE(classify_victim(g, 0, 0));
  EXPECT_THROW(classify_victim(g, 0, 3), RangeError);
  EXPECT_THROW(classify_victim(g, 1, 0), RangeError);
}

TEST(ClassifyVictim, MlcOnlyTopLevelIsAggressor) {
  // levels 1 and 2 are programmed but not PH
  const auto g = StateGrid::single_row(2, {2, 0, 3});
  EXPECT_EQ(*classify_victim(g, 0, 1), (PatternClass{1, 0, 0}));
  EXPECT_FALSE(classify_victim(g, 0, 0));
}

TEST(CountPatterns, AllE) {
  const StateGrid g(1, 4, 7);
  const auto t = count_patterns(g);
  ASSERT_EQ(t.counts.size(), 1u);
  EXPECT_EQ(t.counts.at({0, 0, 0}), 28u);
  EXPECT_EQ(t.e_cells, 28u);
}

TEST(CountPatterns, UncodedShortWord) {
  // data 010010 mapped directly: 0 -> PH, 1 -> E
  const auto g = StateGrid::single_row(1, {1, 0, 1, 1, 0, 1});
  const auto t = count_patterns(g);
  EXPECT_EQ(t.e_cells, 2u);
  EXPECT_EQ(t.counts.at({2, 0, 0}), 2u);
}

TEST(CountPatterns, Checkerboard) {
  StateGrid g(1, 4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g.set(i, j, (i + j) % 2);
  for (std::size_t i = 1; i < 3; ++i) {
    for (std::size_t j = 1; j < 3; ++j) {
      const auto pc = classify_victim(g, i, j);
      if (!pc) continue;
      EXPECT_EQ(pc->n_x, 2);
      EXPECT_EQ(pc->n_y, 2);
      EXPECT_EQ(pc->n_xy, 0);
    }
  }
  const auto t = count_patterns(g);
  EXPECT_EQ(t.e_cells, 8u);
  // diagonals of an E cell are E on a checkerboard
  EXPECT_EQ(t.count_where([](const PatternClass& p) { return p.n_xy > 0; }), 0u);
  EXPECT_EQ(t.counts.at({2, 2, 0}), 2u);
}

TEST(CountPatterns, IsolatedRunsMatchSubstringScan) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = random_grid(1, 6, 40, seed);
    std::size_t isolated = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const auto row = g.row(i);
      for (std::size_t j = 1; j + 1 < row.size(); ++j)
        isolated += row[j - 1] == 1 && row[j] == 0 && row[j + 1] == 1;
    }
    const auto t = count_patterns(g);
    EXPECT_EQ(t.count_where([](const PatternClass& p) { return p.n_x == 2; }), isolated);
    std::size_t total = 0;
    for (const auto& [pc, n] : t.counts) total += n;
    EXPECT_EQ(total, t.e_cells);
  }
}

TEST(CountPatterns, MergeAddsCounts) {
  const auto a = count_patterns(random_grid(2, 5, 9, 1));
  const auto b = count_patterns(random_grid(2, 5, 9, 2));
  PatternTally m = a;
  m.merge(b);
  EXPECT_EQ(m.e_cells, a.e_cells + b.e_cells);
  for (const auto& [pc, n] : m.counts) {
    const auto ia = a.counts.find(pc);
    const auto ib = b.counts.find(pc);
    EXPECT_EQ(n, (ia == a.counts.end() ? 0 : ia->second) + (ib == b.counts.end() ? 0 : ib->second));
  }
}

TEST(ClassifyVictim, TranslationInvariantInInterior) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto patch = random_grid(2, 3, 3, rng());
    const std::size_t di = 1 + rng() % 5, dj = 1 + rng() % 5;
    StateGrid big = random_grid(2, 10, 10, rng());
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) big.set(di + i, dj + j, patch.at(i, j));
    EXPECT_EQ(classify_victim(patch, 1, 1), classify_victim(big, di + 1, dj + 1));
  }
}

TEST(NumPatternClasses, Counts) {
  EXPECT_EQ(num_pattern_classes(std::vector<int>{2, 2, 4}), 45u);
  EXPECT_EQ(num_pattern_classes(std::vector<int>{2, 2, 2, 4, 4, 4, 8}), 30375u);
  EXPECT_EQ(num_pattern_classes(std::vector<int>{2}), 3u);
  EXPECT_THROW(num_pattern_classes(std::vector<int>{-1}), RangeError);
}

TEST(StateGrid, Validation) {
  EXPECT_THROW(StateGrid(1, 2, 2, std::vector<Level>{0, 1, 2, 0}), RangeError);
  EXPECT_THROW(StateGrid(1, 2, 2, std::vector<Level>{0, 1}), LengthError);
  EXPECT_THROW(StateGrid(5, 1, 1), RangeError);
}
