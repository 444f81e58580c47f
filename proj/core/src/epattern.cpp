#include "flashmod/epattern.hpp"

#include <algorithm>
#include <string>

namespace flashmod {

StateGrid::StateGrid(int m_bits, std::size_t rows, std::size_t cols)
    : StateGrid(m_bits, rows, cols, std::vector<Level>(rows * cols, 0)) {}

StateGrid::StateGrid(int m_bits, std::size_t rows, std::size_t cols, std::vector<Level> levels)
    : m_bits_(m_bits), rows_(rows), cols_(cols), levels_(std::move(levels)) {
  if (m_bits < 1 || m_bits > 4) throw RangeError("StateGrid: m_bits must be in [1, 4]");
  if (levels_.size() != rows * cols)
    throw LengthError("StateGrid: expected " + std::to_string(rows * cols) + " levels");
  const Level t = top();
  if (std::any_of(levels_.begin(), levels_.end(), [t](Level v) { return v > t; }))
    throw RangeError("StateGrid: level out of range");
}

StateGrid StateGrid::single_row(int m_bits, std::vector<Level> levels) {
  const std::size_t cols = levels.size();
  return StateGrid(m_bits, 1, cols, std::move(levels));
}

void StateGrid::set(std::size_t i, std::size_t j, Level v) {
  if (i >= rows_ || j >= cols_) throw RangeError("StateGrid::set: index out of bounds");
  if (v > top()) throw RangeError("StateGrid::set: level out of range");
  levels_[i * cols_ + j] = v;
}

std::optional<PatternClass> classify_victim(const StateGrid& g, std::size_t i, std::size_t j) {
  if (i >= g.rows() || j >= g.cols())
    throw RangeError("classify_victim: index out of bounds");
  if (g.at(i, j) != 0) return std::nullopt;

  const Level ph = g.top();
  const auto rows = static_cast<long>(g.rows());
  const auto cols = static_cast<long>(g.cols());
  const auto is_ph = [&](long r, long c) {
    return r >= 0 && r < rows && c >= 0 && c < cols &&
           g.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) == ph;
  };
  const long r = static_cast<long>(i);
  const long c = static_cast<long>(j);
  PatternClass pc;
  pc.n_x = is_ph(r, c - 1) + is_ph(r, c + 1);
  pc.n_y = is_ph(r - 1, c) + is_ph(r + 1, c);
  pc.n_xy = is_ph(r - 1, c - 1) + is_ph(r - 1, c + 1) + is_ph(r + 1, c - 1) +
            is_ph(r + 1, c + 1);
  return pc;
}

void PatternTally::merge(const PatternTally& other) {
  for (const auto& [pc, count] : other.counts) counts[pc] += count;
  e_cells += other.e_cells;
}

PatternTally count_patterns(const StateGrid& g) {
  PatternTally tally;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (auto pc = classify_victim(g, i, j)) {
        ++tally.counts[*pc];
        ++tally.e_cells;
      }
    }
  }
  return tally;
}

std::size_t num_pattern_classes(std::span<const int> bounds) {
  std::size_t n = 1;
  for (int b : bounds) {
    if (b < 0) throw RangeError("num_pattern_classes: bounds must be >= 0");
    n *= static_cast<std::size_t>(b) + 1;
  }
  return n;
}

}  // namespace flashmod
