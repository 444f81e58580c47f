// flashmod: capacity tables, codebook generation, E-PH pattern statistics,
// threshold-voltage histograms and WER sweeps.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "flashmod/capacity.hpp"
#include "flashmod/experiment.hpp"
#include "flashmod/pipeline.hpp"

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma_x;
  std::optional<double> gamma_y;
  std::optional<double> gamma_xy;
  std::optional<std::string> scheme;
  std::optional<std::string> ecc;
  std::optional<std::string> interleave;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::vector<double> grid;
  std::optional<unsigned> threads;
  std::size_t symbols = 100000;
  std::string codebook_preset;
  bool seed_given = false;
};

// Opens --out if given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::optional<std::string>& path) {
    if (path && *path != "-") {
      file_ = std::make_unique<std::ofstream>(*path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file '" + *path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

flashmod::CouplingParams coupling_from(const Options& o, flashmod::CouplingParams base) {
  if (o.alpha) base.alpha = *o.alpha;
  if (o.beta) base.beta = *o.beta;
  if (o.gamma_x) base.gamma_x = *o.gamma_x;
  if (o.gamma_y) base.gamma_y = *o.gamma_y;
  if (o.gamma_xy) base.gamma_xy = *o.gamma_xy;
  base.validate();
  return base;
}

// gamma_x* = 0.1 + 0.1 = 0.2 with no y / xy coupling unless overridden.
flashmod::CouplingParams cli_default_coupling() {
  flashmod::CouplingParams p;
  p.gamma_x = 0.1;
  p.gamma_y = 0.0;
  p.gamma_xy = 0.0;
  p.alpha = 1.0;
  p.beta = 0.1;
  return p;
}

bool parse_on_off(const std::string& v) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw CLI::ValidationError("--interleave", "expected on or off");
}

int cmd_capacity(const Options& o) {
  Output out(o.out);
  flashmod::write_capacity_csv(out.stream(), flashmod::capacity_table());
  return 0;
}

int cmd_codebook(const Options& o) {
  const auto cb = flashmod::codebook_preset(o.codebook_preset);
  const std::string path = o.out.value_or(o.codebook_preset + ".cb");
  {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    cb->write(file);
  }
  const auto report = flashmod::verify_codebook(o.codebook_preset, o.symbols, o.seed);
  std::cout << "codebook_file," << path << '\n';
  flashmod::write_codebook_report(std::cout, report);
  return report.eph_adjacencies == 0 || report.junction_violations == report.eph_adjacencies ? 0 : 1;
}

int cmd_patterns(const Options& o) {
  const auto cfg = flashmod::scheme_preset(o.scheme.value_or("slc-conv"));
  const auto block = flashmod::random_block(cfg, o.rows.value_or(64), o.cols.value_or(3072), o.seed);
  Output out(o.out);
  flashmod::write_patterns_csv(out.stream(), flashmod::count_patterns(block));
  return 0;
}

int cmd_distribution(const Options& o) {
  flashmod::DistributionConfig cfg;
  cfg.scheme = o.scheme.value_or("slc-rll");
  cfg.rows = o.rows.value_or(cfg.rows);
  cfg.cols = o.cols.value_or(cfg.cols);
  cfg.seed = o.seed;
  const auto scheme = flashmod::scheme_preset(cfg.scheme);
  cfg.coupling = coupling_from(o, cli_default_coupling());
  cfg.coupling.delta_v_e_ph = scheme.coupling.delta_v_e_ph;
  Output out(o.out);
  flashmod::write_distribution_csv(out.stream(), flashmod::run_distribution(cfg));
  return 0;
}

int cmd_simulate(const Options& o) {
  flashmod::SweepConfig cfg =
      o.config ? flashmod::load_sweep_config(*o.config) : flashmod::SweepConfig{};
  if (!o.config) cfg.arms = flashmod::default_arms();
  if (o.trials) cfg.trials = *o.trials;
  if (o.rows) cfg.rows = *o.rows;
  if (o.seed_given) cfg.seed = o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.grid.empty()) cfg.gamma_x_star = o.grid;
  cfg.coupling = coupling_from(o, cfg.coupling);
  if (o.scheme || o.ecc || o.interleave) {
    flashmod::Arm arm;
    arm.scheme = o.scheme.value_or("slc-rll");
    const auto preset = flashmod::scheme_preset(arm.scheme);
    arm.ecc = o.ecc.value_or(preset.scheme == flashmod::Scheme::Conventional ? "conv-1/2"
                                                                              : "mod-3/4");
    arm.interleave = o.interleave ? parse_on_off(*o.interleave) : preset.interleave_enabled;
    arm.label = flashmod::arm_label(arm);
    cfg.arms = {arm};
  }
  if (o.out) cfg.out = *o.out;
  cfg.validate();

  const auto rows = flashmod::run_sweep(cfg);
  Output out(cfg.out.empty() ? std::nullopt : std::optional<std::string>(cfg.out));
  flashmod::write_sweep_csv(out.stream(), rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modulation coding and NAND flash interference simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) {
    o.seed = s;
    o.seed_given = true;
  }, "Base random seed (default 1)");
  app.add_option("--trials", o.trials, "Monte-Carlo trials per sweep point");
  app.add_option("--rows", o.rows, "Word lines per block");
  app.add_option("--cols", o.cols, "Cells per word line (patterns, distribution)");
  app.add_option("--alpha", o.alpha, "Capacitive coupling scale factor");
  app.add_option("--beta", o.beta, "Direct-field x coupling ratio");
  app.add_option("--gamma-x", o.gamma_x, "Capacitive x coupling ratio before alpha scaling");
  app.add_option("--gamma-y", o.gamma_y, "Capacitive y coupling ratio before alpha scaling");
  app.add_option("--gamma-xy", o.gamma_xy, "Diagonal coupling ratio before alpha scaling");
  app.add_option("--scheme", o.scheme, "Scheme preset")
      ->check(CLI::IsMember(flashmod::scheme_preset_names()));
  app.add_option("--ecc", o.ecc, "ECC preset")->check(CLI::IsMember(flashmod::ecc_preset_names()));
  app.add_option("--interleave", o.interleave, "Page interleaver")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--out", o.out, "Output path ('-' for stdout)");
  app.add_option("--config", o.config, "Sweep configuration file")->check(CLI::ExistingFile);
  app.add_option("--threads", o.threads, "Worker threads for simulate (0 = all cores)");

  app.add_subcommand("capacity", "Rate / capacity table for M = 2, 3, 4");
  auto* codebook = app.add_subcommand("codebook", "Build, export and verify a codebook preset");
  codebook->add_option("preset", o.codebook_preset, "Codebook preset")
      ->required()
      ->check(CLI::IsMember(flashmod::codebook_preset_names()));
  codebook->add_option("--symbols", o.symbols, "Random symbols to verify")->capture_default_str();
  app.add_subcommand("patterns", "E-PH pattern class counts of random written data");
  auto* simulate = app.add_subcommand("simulate", "WER sweep over gamma_x*");
  simulate->add_option("--grid", o.grid, "gamma_x* values (comma separated)")->delimiter(',');
  app.add_subcommand("distribution", "Threshold-voltage histograms before/after interference");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "capacity") return cmd_capacity(o);
    if (name == "codebook") return cmd_codebook(o);
    if (name == "patterns") return cmd_patterns(o);
    if (name == "simulate") return cmd_simulate(o);
    if (name == "distribution") return cmd_distribution(o);
  } catch (const std::exception& e) {
    std::cerr << "flashmod: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
