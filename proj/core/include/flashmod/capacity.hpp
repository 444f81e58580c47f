#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace flashmod {

/// Dense square matrix of non-negative integers, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  SquareMatrix(std::size_t n, int fill) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  int& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  int operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<int> data_;
};

struct PowerIterationResult {
  double eigenvalue = 0.0;
  int iterations = 0;
};

/// Perron root of an irreducible non-negative matrix by power iteration on
/// A + I from the all-ones vector. Iteration stops once the Collatz-Wielandt
/// bounds min_i (Ax)_i/x_i and max_i (Ax)_i/x_i agree to `rel_tol`, so the
/// returned value is bracketed, not merely stationary.
PowerIterationResult dominant_eigenvalue(const SquareMatrix& a, double rel_tol = 1e-9,
                                         int max_iterations = 100000);

struct RllConstraint {
  int d = 0;
  std::optional<int> k;  ///< nullopt: unbounded zero runs
};

struct CapacityResult {
  double lambda_max = 0.0;
  double capacity = 0.0;  ///< bits of information per stored bit
};

/// Follower-set transfer matrix of a (d, k) constraint. State s counts the
/// zeros emitted since the last one (saturating at d when k is unbounded).
SquareMatrix dk_transfer_matrix(const RllConstraint& c);

CapacityResult rll_capacity(const RllConstraint& c);

/// State transitions of an M-bit cell sequence with no E next to PH: the
/// all-ones 2^M matrix with entries (0, 2^M-1) and (2^M-1, 0) zeroed.
struct TransitionSpec {
  int m_bits = 0;
  SquareMatrix matrix;
};

/// Throws RangeError unless 1 <= m_bits <= 4.
TransitionSpec build_transition_spec(int m_bits);

/// capacity = log2(lambda_max) / M.
CapacityResult mary_capacity(const TransitionSpec& spec);

}  // namespace flashmod
