#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "flashmod/bits.hpp"

namespace flashmod {

/// Cell levels of a block; row i is word line i, column j is bit line j.
class StateGrid {
 public:
  StateGrid() = default;
  /// Zero-filled (all E) grid. Throws RangeError if m_bits is outside [1, 4].
  StateGrid(int m_bits, std::size_t rows, std::size_t cols);
  /// Throws LengthError if levels.size() != rows * cols, RangeError if any
  /// level exceeds 2^M - 1.
  StateGrid(int m_bits, std::size_t rows, std::size_t cols, std::vector<Level> levels);

  static StateGrid single_row(int m_bits, std::vector<Level> levels);

  int m_bits() const { return m_bits_; }
  Level top() const { return static_cast<Level>((1u << m_bits_) - 1); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return levels_.size(); }

  Level at(std::size_t i, std::size_t j) const { return levels_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Level v);

  std::span<const Level> row(std::size_t i) const {
    return std::span<const Level>(levels_).subspan(i * cols_, cols_);
  }
  std::span<const Level> levels() const { return levels_; }

  bool operator==(const StateGrid&) const = default;

 private:
  int m_bits_ = 1;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Level> levels_;
};

/// Aggressor counts of an E victim: PH neighbours along the word line
/// (n_x), along the bit line (n_y) and on the diagonals (n_xy).
struct PatternClass {
  int n_x = 0;
  int n_y = 0;
  int n_xy = 0;

  auto operator<=>(const PatternClass&) const = default;
};

/// Returns nullopt if cell (i, j) is not in E. Neighbours outside the grid
/// count as non-PH. Throws RangeError for an out-of-bounds index.
std::optional<PatternClass> classify_victim(const StateGrid& g, std::size_t i, std::size_t j);

struct PatternTally {
  std::map<PatternClass, std::size_t> counts;
  std::size_t e_cells = 0;

  template <class Pred>
  std::size_t count_where(Pred pred) const {
    std::size_t n = 0;
    for (const auto& [pc, count] : counts)
      if (pred(pc)) n += count;
    return n;
  }
  void merge(const PatternTally& other);
};

/// Tally of classify_victim over every E cell, (0,0,0) included.
PatternTally count_patterns(const StateGrid& g);

/// Number of distinct aggressor-count classes: product of (bound + 1).
std::size_t num_pattern_classes(std::span<const int> bounds);

}  // namespace flashmod
