#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flashmod/channel.hpp"
#include "flashmod/epattern.hpp"
#include "flashmod/pipeline.hpp"

namespace flashmod {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Capacity table

struct CapacityRow {
  int m_bits = 0;
  double binary_rate = 0.0;
  double binary_capacity = 0.0;
  std::optional<double> mary_rate;  ///< highest-rate codebook preset for this M
  double mary_capacity = 0.0;
};

/// Rows for M = 2, 3, 4, computed from the codes and transition matrices.
std::vector<CapacityRow> capacity_table();
void write_capacity_csv(std::ostream& os, const std::vector<CapacityRow>& rows);

// ---------------------------------------------------------------------------
// Codebook report

struct CodebookReport {
  std::string preset;
  /// Candidate counts for every (first, last) pair, first-major.
  std::vector<std::size_t> subset_counts;
  std::size_t total_candidates = 0;
  std::size_t pool_size = 0;
  std::size_t codebook_size = 0;
  double rate = 0.0;
  std::size_t symbols_checked = 0;
  std::size_t eph_adjacencies = 0;  ///< in the random encoded stream
  std::size_t junctions = 0;
  std::size_t junction_violations = 0;
};

CodebookReport verify_codebook(const std::string& preset, std::size_t symbols,
                               std::uint64_t seed);
void write_codebook_report(std::ostream& os, const CodebookReport& r);

// ---------------------------------------------------------------------------
// Random pass-through blocks

/// Per-page user data that fills (up to the scheme's granularity) a word
/// line of `cols` cells in pass-through mode.
std::vector<BitString> random_pass_through_row(const SchemeConfig& cfg, std::size_t cols,
                                               std::uint64_t seed);

/// rows x cols (or slightly fewer columns) block of random data written
/// through the scheme with ECC disabled.
StateGrid random_block(const SchemeConfig& cfg, std::size_t rows, std::size_t cols,
                       std::uint64_t seed);

void write_patterns_csv(std::ostream& os, const PatternTally& tally);

// ---------------------------------------------------------------------------
// Threshold-voltage distributions

struct DistributionConfig {
  std::string scheme = "slc-rll";
  std::size_t rows = 64;
  std::size_t cols = 3072;
  CouplingParams coupling;  ///< gamma_x* = 0.2, gamma_y = gamma_xy = 0 by default
  std::uint64_t seed = 1;

  DistributionConfig();
};

struct DistributionSeries {
  std::string label;                       ///< e.g. "conv_before"
  std::vector<std::vector<std::size_t>> per_level;  ///< [level][bin]
};

struct DistributionResult {
  Histogram axis;  ///< bin layout shared by every series (counts unused)
  std::vector<DistributionSeries> series;
  /// Programmed E-cell blocks, before and after interference.
  CellGrid conventional;
  CellGrid modulated;
};

DistributionResult run_distribution(const DistributionConfig& cfg);
void write_distribution_csv(std::ostream& os, const DistributionResult& r);

/// Fraction of E cells per distinct interference shift (rounded to 1e-9 V).
std::map<double, double> e_cell_shift_mixture(const CellGrid& g);

// ---------------------------------------------------------------------------
// WER sweeps

struct Arm {
  std::string label;
  std::string scheme = "slc-rll";
  std::string ecc = "mod-3/4";
  bool interleave = true;
};

struct SweepConfig {
  std::vector<double> gamma_x_star{0.0, 0.1, 0.2, 0.3};
  std::size_t trials = 1000;
  std::size_t rows = 1;
  std::size_t codewords_per_page = 16;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0: hardware concurrency
  CouplingParams coupling;
  std::vector<Arm> arms;
  std::string out;

  SweepConfig();
  /// Throws ConfigError on an empty or non-increasing grid, zero trials or
  /// unknown presets.
  void validate() const;
};

/// Conventional vs. modulation arms at (approximately) equal overall rate.
std::vector<Arm> default_arms();
std::string arm_label(const Arm& arm);

/// Parses the key = value config format (see README). Unknown keys are
/// rejected.
SweepConfig parse_sweep_config(std::istream& is);
SweepConfig load_sweep_config(const std::string& path);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

/// 95% Wilson score interval for `failures` out of `n`.
WilsonInterval wilson_interval(std::size_t failures, std::size_t n, double z = 1.959963984540054);

struct SweepRow {
  double gamma_x_star = 0.0;
  std::string scheme;
  std::size_t trials = 0;
  std::size_t codewords = 0;
  std::size_t failures = 0;
  double wer = 0.0;
  WilsonInterval ci;
};

/// Builds the scheme configuration an arm runs with.
SchemeConfig arm_config(const Arm& arm, const SweepConfig& sweep);

/// Runs `trials` independent blocks of `cfg` and counts ECC codeword
/// failures. Trial t uses seed base_seed + t, so the result does not depend
/// on the thread count.
SweepRow run_point(const SchemeConfig& cfg, std::size_t trials, std::uint64_t base_seed,
                   unsigned threads);

/// Rows ordered by arm (in config order), then by gamma_x*.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace flashmod
