#include "flashmod/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace flashmod {

CouplingParams CouplingParams::effective(double x_star, double y, double xy,
                                         double delta_v) {
  CouplingParams p;
  p.gamma_x = x_star;
  p.gamma_y = y;
  p.gamma_xy = xy;
  p.beta = 0.0;
  p.alpha = 1.0;
  p.delta_v_e_ph = delta_v;
  return p;
}

CouplingParams CouplingParams::with_effective_x(double x_star) const {
  CouplingParams p = *this;
  const double capacitive = alpha * gamma_x;
  if (capacitive <= x_star) {
    p.beta = x_star - capacitive;
  } else {
    p.gamma_x = x_star / alpha;
    p.beta = 0.0;
  }
  return p;
}

void CouplingParams::validate() const {
  for (double v : {gamma_x, gamma_y, gamma_xy, beta, alpha, delta_v_e_ph}) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("CouplingParams: values must be finite and >= 0");
  }
}

StateDistribution::StateDistribution(std::vector<LevelStats> levels)
    : levels_(std::move(levels)) {
  if (levels_.size() < 2) throw std::invalid_argument("StateDistribution: need >= 2 levels");
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (!(levels_[l].sigma > 0.0))
      throw std::invalid_argument("StateDistribution: sigma must be > 0");
    if (l > 0 && !(levels_[l].mean > levels_[l - 1].mean))
      throw std::invalid_argument("StateDistribution: means must increase with level");
  }
}

StateDistribution StateDistribution::slc_default() {
  return StateDistribution({{-1.0, 0.25}, {1.0, 0.25}});
}

StateDistribution StateDistribution::defaults_for(int m_bits) {
  if (m_bits < 1 || m_bits > 4) throw RangeError("StateDistribution: m_bits must be in [1, 4]");
  if (m_bits == 1) return slc_default();
  std::vector<LevelStats> levels{{-1.0, 0.25}};
  const int q = 1 << m_bits;
  for (int l = 1; l < q; ++l) levels.push_back({1.0 + (l - 1), 0.15});
  return StateDistribution(std::move(levels));
}

double aggressor_shift(Level level, const StateDistribution& dist) {
  if (level >= dist.num_levels()) throw RangeError("aggressor_shift: level out of range");
  return dist[level].mean - dist[0].mean;
}

CellGrid program_grid(const StateGrid& states, const StateDistribution& dist,
                      std::uint64_t seed) {
  if (dist.num_levels() < (std::size_t{1} << states.m_bits()))
    throw RangeError("program_grid: distribution does not cover every level");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  CellGrid g;
  g.states = states;
  const auto levels = states.levels();
  g.v_nominal.resize(levels.size());
  for (std::size_t c = 0; c < levels.size(); ++c) {
    const auto& s = dist[levels[c]];
    g.v_nominal[c] = s.mean + s.sigma * unit(rng);
  }
  g.v_actual = g.v_nominal;
  g.shift.assign(levels.size(), 0.0);
  return g;
}

CellGrid apply_interference(CellGrid g, const CouplingParams& p,
                            const StateDistribution& dist) {
  p.validate();
  const StateGrid& s = g.states;
  const std::size_t rows = s.rows();
  const std::size_t cols = s.cols();
  if (dist.num_levels() < (std::size_t{1} << s.m_bits()))
    throw RangeError("apply_interference: distribution does not cover every level");

  // Per-level aggressor contribution.
  const double full = aggressor_shift(s.top(), dist);
  std::vector<double> dv(dist.num_levels());
  for (std::size_t l = 0; l < dv.size(); ++l)
    dv[l] = p.delta_v_e_ph * (aggressor_shift(static_cast<Level>(l), dist) / full);
  dv[s.top()] = p.delta_v_e_ph;

  const double gx = p.effective_x();
  const double gy = p.effective_y();
  const double gxy = p.effective_xy();
  const auto cell_dv = [&](std::size_t i, std::size_t j) { return dv[s.at(i, j)]; };

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double x = 0.0, y = 0.0, xy = 0.0;
      if (j > 0) x += cell_dv(i, j - 1);
      if (j + 1 < cols) x += cell_dv(i, j + 1);
      if (i > 0) {
        y += cell_dv(i - 1, j);
        if (j > 0) xy += cell_dv(i - 1, j - 1);
        if (j + 1 < cols) xy += cell_dv(i - 1, j + 1);
      }
      if (i + 1 < rows) {
        y += cell_dv(i + 1, j);
        if (j > 0) xy += cell_dv(i + 1, j - 1);
        if (j + 1 < cols) xy += cell_dv(i + 1, j + 1);
      }
      const std::size_t c = i * cols + j;
      g.shift[c] = gx * x + gy * y + gxy * xy;
      g.v_actual[c] = g.v_nominal[c] + g.shift[c];
    }
  }
  return g;
}

double max_shift(const CouplingParams& p) {
  return (2.0 * p.effective_x() + 2.0 * p.effective_y() + 4.0 * p.effective_xy()) *
         p.delta_v_e_ph;
}

void Histogram::add(double v) {
  if (counts.empty()) return;
  const double pos = std::floor((v - lo) / width);
  const auto last = static_cast<double>(counts.size() - 1);
  counts[static_cast<std::size_t>(std::clamp(pos, 0.0, last))]++;
}

Histogram make_histogram(std::span<const double> voltages, double lo, double hi,
                         double width) {
  if (!(width > 0.0) || !(hi > lo)) throw std::invalid_argument("make_histogram: bad range");
  Histogram h;
  h.lo = lo;
  h.width = width;
  h.counts.assign(static_cast<std::size_t>(std::ceil((hi - lo) / width)), 0);
  for (double v : voltages) h.add(v);
  return h;
}

std::vector<double> estimate_thresholds(std::span<const double> voltages,
                                        const StateDistribution& dist) {
  if (voltages.empty()) throw std::invalid_argument("estimate_thresholds: no voltages");
  const auto [min_it, max_it] = std::minmax_element(voltages.begin(), voltages.end());
  const Histogram h =
      make_histogram(voltages, *min_it - 0.5, *max_it + 0.5, kThresholdBinWidth);

  // Centred 5-bin moving sum; same argmin as the moving average, but exact.
  const std::size_t n = h.counts.size();
  const int half = kThresholdSmoothing / 2;
  std::vector<std::size_t> smooth(n, 0);
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t from = b >= static_cast<std::size_t>(half) ? b - half : 0;
    const std::size_t to = std::min(n - 1, b + half);
    for (std::size_t k = from; k <= to; ++k) smooth[b] += h.counts[k];
  }

  std::vector<double> thresholds;
  for (std::size_t l = 0; l + 1 < dist.num_levels(); ++l) {
    const double lo_mean = dist[l].mean;
    const double hi_mean = dist[l + 1].mean;
    bool found = false;
    std::size_t best = 0;
    for (std::size_t b = 0; b < n; ++b) {
      const double c = h.center(b);
      if (c <= lo_mean || c >= hi_mean) continue;
      if (!found || smooth[b] < smooth[best]) {
        best = b;
        found = true;
      }
    }
    thresholds.push_back(found ? h.center(best) : 0.5 * (lo_mean + hi_mean));
  }
  return thresholds;
}

StateGrid read_hard(const CellGrid& g, std::span<const double> thresholds) {
  const std::size_t expected = (std::size_t{1} << g.states.m_bits()) - 1;
  if (thresholds.size() != expected)
    throw std::invalid_argument("read_hard: expected 2^M - 1 thresholds");
  for (std::size_t t = 1; t < thresholds.size(); ++t) {
    if (!(thresholds[t] > thresholds[t - 1]))
      throw std::invalid_argument("read_hard: thresholds must be strictly increasing");
  }
  std::vector<Level> levels(g.v_actual.size());
  for (std::size_t c = 0; c < levels.size(); ++c) {
    const double v = g.v_actual[c];
    levels[c] = static_cast<Level>(
        std::lower_bound(thresholds.begin(), thresholds.end(), v) - thresholds.begin());
  }
  return StateGrid(g.states.m_bits(), g.states.rows(), g.states.cols(), std::move(levels));
}

}  // namespace flashmod
