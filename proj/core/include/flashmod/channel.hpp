#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flashmod/epattern.hpp"

namespace flashmod {

/// Coupling ratios of the neighbour interference model. The capacitive
/// ratios are scaled by `alpha`; `beta` is the direct-field contribution that
/// adds to the word-line (x) ratio only.
struct CouplingParams {
  double gamma_x = 0.1;
  double gamma_y = 0.08;
  double gamma_xy = 0.006;
  double beta = 0.0;
  double alpha = 1.0;
  double delta_v_e_ph = 2.0;  ///< volts; threshold shift of an E -> PH program

  double effective_x() const { return alpha * gamma_x + beta; }
  double effective_y() const { return alpha * gamma_y; }
  double effective_xy() const { return alpha * gamma_xy; }

  /// Parameters whose effective ratios are exactly the given values
  /// (alpha = 1, beta = 0).
  static CouplingParams effective(double x_star, double y, double xy, double delta_v);

  /// Keeps alpha, gamma_y and gamma_xy and reaches the requested effective
  /// x ratio through beta. If alpha * gamma_x already exceeds it, gamma_x is
  /// lowered instead and beta is zero.
  CouplingParams with_effective_x(double x_star) const;

  /// Throws std::invalid_argument if any field is negative or not finite.
  void validate() const;
};

struct LevelStats {
  double mean = 0.0;
  double sigma = 0.0;
};

/// Per-level Gaussian threshold-voltage distribution before interference.
class StateDistribution {
 public:
  /// Throws std::invalid_argument unless sigma > 0 everywhere and the means
  /// are strictly increasing.
  explicit StateDistribution(std::vector<LevelStats> levels);

  /// SLC: E ~ N(-1, 0.25^2), PH ~ N(1, 0.25^2).
  static StateDistribution slc_default();
  /// SLC defaults for M = 1. For M >= 2: E ~ N(-1, 0.25^2) and program
  /// level l ~ N(1 + (l - 1), 0.15^2).
  static StateDistribution defaults_for(int m_bits);

  std::size_t num_levels() const { return levels_.size(); }
  const LevelStats& operator[](std::size_t level) const { return levels_.at(level); }
  std::span<const LevelStats> levels() const { return levels_; }

 private:
  std::vector<LevelStats> levels_;
};

/// Programming shift from E to `level`: mean(level) - mean(0).
double aggressor_shift(Level level, const StateDistribution& dist);

/// Threshold voltages of a programmed block. Invariant:
/// v_actual[c] == v_nominal[c] + shift[c] for every cell c (row-major).
struct CellGrid {
  StateGrid states;
  std::vector<double> v_nominal;
  std::vector<double> v_actual;
  std::vector<double> shift;
};

/// Draws each cell's voltage from its level's Gaussian. Deterministic in
/// `seed`. Throws RangeError if a level has no entry in `dist`.
CellGrid program_grid(const StateGrid& states, const StateDistribution& dist,
                      std::uint64_t seed);

/// One-pass superposition of neighbour programming shifts onto every cell:
///
///   shift = x* (left + right) + y (up + down) + xy (four diagonals)
///
/// where each neighbour contributes delta_v_e_ph scaled by how far its level
/// sits between E and PH (so PH neighbours contribute exactly
/// delta_v_e_ph). Missing neighbours contribute nothing.
CellGrid apply_interference(CellGrid g, const CouplingParams& p,
                            const StateDistribution& dist);

/// Shift of an E cell with all eight neighbours in PH:
/// (2 x* + 2 y + 4 xy) * delta_v_e_ph.
double max_shift(const CouplingParams& p);

/// Fixed-width voltage histogram.
struct Histogram {
  double lo = 0.0;
  double width = 0.02;
  std::vector<std::size_t> counts;

  double center(std::size_t bin) const { return lo + (static_cast<double>(bin) + 0.5) * width; }
  /// Out-of-range samples are clamped into the edge bins.
  void add(double v);
};

Histogram make_histogram(std::span<const double> voltages, double lo, double hi,
                         double width);

inline constexpr double kThresholdBinWidth = 0.02;
inline constexpr int kThresholdSmoothing = 5;

/// Valley-search read levels: histogram with 0.02 V bins over
/// [min - 0.5, max + 0.5], 5-bin moving sum, and for each adjacent pair of
/// levels the centre of the emptiest bin strictly between their nominal
/// means (lowest such bin on ties). Returns num_levels - 1 thresholds.
std::vector<double> estimate_thresholds(std::span<const double> voltages,
                                        const StateDistribution& dist);

/// Level = number of thresholds strictly below the cell voltage. Throws
/// std::invalid_argument unless the thresholds are strictly increasing and
/// there are 2^M - 1 of them.
StateGrid read_hard(const CellGrid& g, std::span<const double> thresholds);

}  // namespace flashmod
