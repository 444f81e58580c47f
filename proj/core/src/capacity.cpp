#include "flashmod/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flashmod/bits.hpp"

namespace flashmod {

PowerIterationResult dominant_eigenvalue(const SquareMatrix& a, double rel_tol,
                                         int max_iterations) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("dominant_eigenvalue: empty matrix");

  // The shift by I makes any irreducible non-negative matrix primitive, so
  // the iteration converges even for periodic constraint graphs.
  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  for (int it = 1; it <= max_iterations; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double acc = x[r];
      for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * x[c];
      y[r] = acc;
      lo = std::min(lo, acc / x[r]);
      hi = std::max(hi, acc / x[r]);
      norm = std::max(norm, acc);
    }
    if (hi - lo <= rel_tol * hi) return {0.5 * (lo + hi) - 1.0, it};
    for (std::size_t r = 0; r < n; ++r) x[r] = y[r] / norm;
  }
  throw std::runtime_error("dominant_eigenvalue: no convergence");
}

SquareMatrix dk_transfer_matrix(const RllConstraint& c) {
  if (c.d < 0) throw std::invalid_argument("RllConstraint: d must be >= 0");
  if (c.k && (*c.k <= c.d))
    throw std::invalid_argument("RllConstraint: d must be < k");

  const int last = c.k ? *c.k : c.d;
  SquareMatrix t(static_cast<std::size_t>(last) + 1, 0);
  for (int s = 0; s <= last; ++s) {
    if (!c.k || s < *c.k) t(s, std::min(s + 1, last)) += 1;  // emit 0
    if (s >= c.d) t(s, 0) += 1;                                // emit 1
  }
  return t;
}

CapacityResult rll_capacity(const RllConstraint& c) {
  const double lambda = dominant_eigenvalue(dk_transfer_matrix(c)).eigenvalue;
  return {lambda, std::log2(lambda)};
}

TransitionSpec build_transition_spec(int m_bits) {
  if (m_bits < 1 || m_bits > 4)
    throw RangeError("build_transition_spec: m_bits must be in [1, 4]");
  const std::size_t q = std::size_t{1} << m_bits;
  TransitionSpec spec{m_bits, SquareMatrix(q, 1)};
  spec.matrix(0, q - 1) = 0;
  spec.matrix(q - 1, 0) = 0;
  return spec;
}

CapacityResult mary_capacity(const TransitionSpec& spec) {
  const double lambda = dominant_eigenvalue(spec.matrix).eigenvalue;
  return {lambda, std::log2(lambda) / spec.m_bits};
}

}  // namespace flashmod
