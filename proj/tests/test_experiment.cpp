#include <gtest/gtest.h>

#include <sstream>

#include "flashmod/experiment.hpp"

using namespace flashmod;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_sweep_config(is);
}

}  // namespace

TEST(Config, FullFile) {
  const auto cfg = parse(
      "[sweep]\n"
      "gamma_x_star = 0.0, 0.15,0.3\n"
      "trials = 25\n"
      "rows = 2\n"
      "seed = 99\n"
      "threads = 1\n"
      "out = wer.csv\n"
      "[coupling]\n"
      "alpha = 1.5\n"
      "gamma_y = 0.02\n"
      "[arm.conv]\n"
      "scheme = slc-conv\n"
      "ecc = conv-1/2\n"
      "[arm.mod]\n"
      "scheme = slc-rll\n"
      "ecc = mod-3/4\n"
      "interleave = on\n");
  EXPECT_EQ(cfg.gamma_x_star, (std::vector<double>{0.0, 0.15, 0.3}));
  EXPECT_EQ(cfg.trials, 25u);
  EXPECT_EQ(cfg.rows, 2u);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.out, "wer.csv");
  EXPECT_DOUBLE_EQ(cfg.coupling.alpha, 1.5);
  EXPECT_DOUBLE_EQ(cfg.coupling.gamma_y, 0.02);
  ASSERT_EQ(cfg.arms.size(), 2u);
  EXPECT_EQ(cfg.arms[0].label, "conv");
  EXPECT_FALSE(cfg.arms[0].interleave);
  EXPECT_TRUE(cfg.arms[1].interleave);
}

TEST(Config, DefaultsToStandardArms) {
  const auto cfg = parse("[sweep]\ntrials = 3\n");
  EXPECT_EQ(cfg.arms.size(), default_arms().size());
  EXPECT_EQ(cfg.gamma_x_star.size(), 4u);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[sweep]\ntrails = 3\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\ngamma_x_star = 0.2, 0.1\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\ngamma_x_star = 0.2, x\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\ntrials = 0\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\ntrials = many\n"), ConfigError);
  EXPECT_THROW(parse("[arm.a]\nscheme = slc-rll\n"), ConfigError);
  EXPECT_THROW(parse("[arm.a]\nscheme = nope\necc = mod-3/4\n"), ConfigError);
  EXPECT_THROW(parse("[arm.a]\nscheme = slc-rll\necc = mod-3/4\ninterleave = maybe\n"), ConfigError);
  EXPECT_THROW(parse("[coupling]\nbeta = -0.1\n"), ConfigError);
  EXPECT_THROW(parse("[extra]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("[sweep\n"), ConfigError);
  EXPECT_THROW(load_sweep_config("/nonexistent/sweep.ini"), ConfigError);
}

TEST(Wilson, KnownValues) {
  const auto zero = wilson_interval(0, 10);
  EXPECT_DOUBLE_EQ(zero.low, 0.0);
  const double z2 = 1.959963984540054 * 1.959963984540054;
  EXPECT_NEAR(zero.high, z2 / (10 + z2), 1e-12);
  const auto half = wilson_interval(5, 10);
  EXPECT_NEAR(half.low + half.high, 1.0, 1e-12);
  EXPECT_NEAR(half.low, 0.236593, 1e-6);
  const auto all = wilson_interval(10, 10);
  EXPECT_DOUBLE_EQ(all.high, 1.0);
  EXPECT_NEAR(all.low, 1.0 - zero.high, 1e-12);
}

TEST(CapacityTable, RowsAndCsv) {
  const auto rows = capacity_table();
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].binary_rate, 0.8333, 1e-4);
  EXPECT_NEAR(rows[0].binary_capacity, 0.8471, 1e-4);
  EXPECT_NEAR(*rows[0].mary_rate, 0.8, 1e-12);
  EXPECT_NEAR(rows[1].binary_capacity, 0.8981, 1e-4);
  EXPECT_NEAR(*rows[1].mary_rate, 14.0 / 15.0, 1e-12);
  EXPECT_NEAR(rows[2].binary_capacity, 0.9236, 1e-4);
  EXPECT_FALSE(rows[2].mary_rate);
  EXPECT_NEAR(rows[2].mary_capacity, 0.9973, 1e-4);
  std::ostringstream a, b;
  write_capacity_csv(a, rows);
  write_capacity_csv(b, capacity_table());
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(),
            "m_bits,binary_rll_rate,binary_rll_capacity,mary_rate,mary_capacity\n"
            "2,0.8333,0.8471,0.8000,0.9163\n"
            "3,0.8889,0.8981,0.9333,0.9861\n"
            "4,0.9167,0.9236,,0.9973\n");
}

TEST(CodebookReport, SubsetsAndJunctions) {
  const auto r = verify_codebook("mlc2-q-cb1", 100000, 1);
  EXPECT_EQ(r.total_candidates, 634u);
  EXPECT_EQ(r.pool_size, 387u);
  EXPECT_EQ(r.codebook_size, 256u);
  EXPECT_EQ(r.eph_adjacencies, 0u);
  EXPECT_GE(r.symbols_checked, 100000u);
  ASSERT_EQ(r.subset_counts.size(), 16u);
  EXPECT_EQ(r.subset_counts[5], 50u);
  const auto r2 = verify_codebook("mlc2-q-cb2", 100000, 1);
  EXPECT_EQ(r2.eph_adjacencies, r2.junction_violations);
  EXPECT_GT(r2.junction_violations, 0u);
}

TEST(Patterns, CsvHasEveryClass) {
  const auto block = random_block(scheme_preset("slc-conv"), 4, 300, 3);
  std::ostringstream os;
  write_patterns_csv(os, count_patterns(block));
  std::size_t lines = 0;
  for (char c : os.str()) lines += c == '\n';
  EXPECT_EQ(lines, 46u);
}

TEST(Distribution, ShiftMixtures) {
  DistributionConfig cfg;
  cfg.rows = 64;
  cfg.cols = 3072;
  const auto r = run_distribution(cfg);
  const auto conv = e_cell_shift_mixture(r.conventional);
  ASSERT_EQ(conv.size(), 3u);
  auto it = conv.begin();
  EXPECT_NEAR(it->first, 0.0, 1e-9);
  EXPECT_NEAR((it++)->second, 0.25, 0.02);
  EXPECT_NEAR(it->first, 0.4, 1e-9);
  EXPECT_NEAR((it++)->second, 0.5, 0.02);
  EXPECT_NEAR(it->first, 0.8, 1e-9);
  EXPECT_NEAR(it->second, 0.25, 0.02);
  for (const auto& [shift, w] : e_cell_shift_mixture(r.modulated)) EXPECT_LT(shift, 0.8 - 1e-9);
  ASSERT_EQ(r.series.size(), 4u);
  EXPECT_EQ(r.series[0].label, "conv_before");
}

TEST(Distribution, NoCouplingLeavesHistogramsUnchanged) {
  DistributionConfig cfg;
  cfg.rows = 8;
  cfg.cols = 600;
  cfg.coupling = CouplingParams::effective(0.0, 0.0, 0.0, 2.0);
  const auto r = run_distribution(cfg);
  EXPECT_EQ(r.series[0].per_level, r.series[1].per_level);
  EXPECT_EQ(r.series[2].per_level, r.series[3].per_level);
}

TEST(Sweep, NoCouplingMeansNoFailures) {
  SweepConfig cfg;
  cfg.gamma_x_star = {0.0};
  cfg.trials = 3;
  cfg.threads = 1;
  cfg.arms = default_arms();
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), cfg.arms.size());
  for (const auto& r : rows) {
    EXPECT_EQ(r.failures, 0u) << r.scheme;
    EXPECT_EQ(r.wer, 0.0);
    EXPECT_EQ(r.trials, 3u);
    EXPECT_EQ(r.codewords, 48u);
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "gamma_x_star,scheme,wer,trials,wilson_interval_low,wilson_interval_high");
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  SweepConfig sweep;
  Arm arm{"", "slc-conv", "conv-9/10", false};
  auto cfg = arm_config(arm, sweep);
  cfg.coupling = cfg.coupling.with_effective_x(0.3);
  const auto one = run_point(cfg, 6, 11, 1);
  const auto three = run_point(cfg, 6, 11, 3);
  EXPECT_EQ(one.failures, three.failures);
  EXPECT_EQ(one.codewords, three.codewords);
  EXPECT_GT(one.failures, 0u);
}
