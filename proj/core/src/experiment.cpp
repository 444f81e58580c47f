#include "flashmod/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "flashmod/capacity.hpp"
#include "flashmod/seed.hpp"

namespace flashmod {
namespace {

Level top_of(int m_bits) { return static_cast<Level>((1u << m_bits) - 1); }

BitString random_bits(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitString out(count);
  std::uint64_t pool = 0;
  int left = 0;
  for (auto& b : out) {
    if (left == 0) {
      pool = rng();
      left = 64;
    }
    b = static_cast<Bit>(pool & 1u);
    pool >>= 1;
    --left;
  }
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

SchemeConfig pass_through(SchemeConfig cfg) {
  cfg.ecc.reset();
  cfg.interleave_enabled = false;
  return cfg;
}

std::string conventional_for(int m_bits) {
  return m_bits == 1 ? "slc-conv" : "mlc" + std::to_string(m_bits) + "-conv";
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<CapacityRow> capacity_table() {
  std::vector<CapacityRow> rows;
  for (int m = 2; m <= 4; ++m) {
    CapacityRow row;
    row.m_bits = m;

    SchemeConfig binary;
    binary.scheme = Scheme::MlcBinaryRll;
    binary.m_bits = m;
    const RateSummary b = rate_accounting(binary);
    row.binary_rate = b.modulation_rate;
    row.binary_capacity = b.capacity;

    row.mary_capacity = mary_capacity(build_transition_spec(m)).capacity;
    for (const auto& name : codebook_preset_names()) {
      const auto cb = codebook_preset(name);
      if (cb->m_bits() != m) continue;
      if (cb->policy().kind() != BoundaryPolicy::Kind::ExcludeLevelAtEnds) continue;
      row.mary_rate = std::max(row.mary_rate.value_or(0.0), cb->rate());
    }
    rows.push_back(row);
  }
  return rows;
}

void write_capacity_csv(std::ostream& os, const std::vector<CapacityRow>& rows) {
  os << "m_bits,binary_rll_rate,binary_rll_capacity,mary_rate,mary_capacity\n";
  for (const auto& r : rows) {
    os << r.m_bits << ',' << fixed(r.binary_rate, 4) << ',' << fixed(r.binary_capacity, 4)
       << ',' << (r.mary_rate ? fixed(*r.mary_rate, 4) : std::string()) << ','
       << fixed(r.mary_capacity, 4) << '\n';
  }
}

// ---------------------------------------------------------------------------

CodebookReport verify_codebook(const std::string& preset, std::size_t symbols,
                               std::uint64_t seed) {
  const auto cb = codebook_preset(preset);
  const int m = cb->m_bits();
  const int len = cb->word_len();
  const Level top = top_of(m);

  CodebookReport r;
  r.preset = preset;
  for (int f = 0; f <= top; ++f) {
    for (int l = 0; l <= top; ++l) {
      const auto n = enumerate_candidates(m, len, static_cast<Level>(f), static_cast<Level>(l)).size();
      r.subset_counts.push_back(n);
      r.total_candidates += n;
    }
  }
  r.pool_size = cb->pool_size();
  r.codebook_size = cb->words().size();
  r.rate = cb->rate();

  const std::size_t words = (symbols + len - 1) / static_cast<std::size_t>(len);
  const auto stream = cb->encode(random_bits(words * cb->data_bits(), seed));
  r.symbols_checked = stream.size();
  for (std::size_t i = 1; i < stream.size(); ++i) {
    const bool bad = (stream[i - 1] == 0 && stream[i] == top) ||
                     (stream[i - 1] == top && stream[i] == 0);
    r.eph_adjacencies += bad;
    if (i % len == 0) {
      ++r.junctions;
      r.junction_violations += bad;
    }
  }
  return r;
}

void write_codebook_report(std::ostream& os, const CodebookReport& r) {
  os << "preset," << r.preset << '\n';
  os << "total_candidates," << r.total_candidates << '\n';
  os << "pool_size," << r.pool_size << '\n';
  os << "codebook_size," << r.codebook_size << '\n';
  os << "rate," << fixed(r.rate, 4) << '\n';
  os << "symbols_checked," << r.symbols_checked << '\n';
  os << "eph_adjacencies," << r.eph_adjacencies << '\n';
  os << "junctions," << r.junctions << '\n';
  os << "junction_violations," << r.junction_violations << '\n';
  const int q = static_cast<int>(std::lround(std::sqrt(static_cast<double>(r.subset_counts.size()))));
  os << "subset,first,last,candidates\n";
  for (std::size_t s = 0; s < r.subset_counts.size(); ++s)
    os << s + 1 << ',' << s / q << ',' << s % q << ',' << r.subset_counts[s] << '\n';
}

// ---------------------------------------------------------------------------

std::vector<BitString> random_pass_through_row(const SchemeConfig& cfg, std::size_t cols,
                                               std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(cfg.m_bits);
  std::vector<BitString> pages;
  const auto page_seed = [seed](std::size_t p) { return derive_seed(seed, {p}); };
  switch (cfg.scheme) {
    case Scheme::Conventional:
      for (std::size_t p = 0; p < m; ++p) pages.push_back(random_bits(cols, page_seed(p)));
      break;
    case Scheme::SlcRllNrzi:
      pages.push_back(random_bits(cols / 3 * 2, page_seed(0)));
      break;
    case Scheme::MlcBinaryRll:
      for (std::size_t p = 0; p + 1 < m; ++p)
        pages.push_back(random_bits(cols / 3 * 3, page_seed(p)));
      pages.push_back(random_bits(cols / 3 * 2, page_seed(m - 1)));
      break;
    case Scheme::MlcMaryCodebook: {
      const auto words = cols / static_cast<std::size_t>(cfg.codebook->word_len());
      pages.push_back(random_bits(words * cfg.codebook->data_bits(), page_seed(0)));
      for (std::size_t p = 1; p < m; ++p) pages.emplace_back();
      break;
    }
  }
  return pages;
}

StateGrid random_block(const SchemeConfig& cfg, std::size_t rows, std::size_t cols,
                       std::uint64_t seed) {
  const SchemeConfig raw = pass_through(cfg);
  std::vector<Level> levels;
  std::size_t width = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto data = random_pass_through_row(raw, cols, derive_seed(seed, {r}));
    auto written = encode_write(data, raw, derive_seed(seed, {r, 1}));
    width = written.row.cols();
    const auto row = written.row.levels();
    levels.insert(levels.end(), row.begin(), row.end());
  }
  return StateGrid(cfg.m_bits, rows, width, std::move(levels));
}

void write_patterns_csv(std::ostream& os, const PatternTally& tally) {
  os << "n_x,n_y,n_xy,count,fraction_of_E_cells\n";
  for (int x = 0; x <= 2; ++x) {
    for (int y = 0; y <= 2; ++y) {
      for (int xy = 0; xy <= 4; ++xy) {
        const auto it = tally.counts.find({x, y, xy});
        const std::size_t count = it == tally.counts.end() ? 0 : it->second;
        const double frac =
            tally.e_cells ? static_cast<double>(count) / static_cast<double>(tally.e_cells) : 0.0;
        os << x << ',' << y << ',' << xy << ',' << count << ',' << fixed(frac, 6) << '\n';
      }
    }
  }
}

// ---------------------------------------------------------------------------

DistributionConfig::DistributionConfig()
    : coupling(CouplingParams::effective(0.2, 0.0, 0.0, 2.0)) {}

DistributionResult run_distribution(const DistributionConfig& cfg) {
  const SchemeConfig mod = scheme_preset(cfg.scheme);
  const SchemeConfig conv = scheme_preset(conventional_for(mod.m_bits));
  const StateDistribution& dist = mod.dist;

  DistributionResult r;
  const auto program = [&](const SchemeConfig& s, std::uint64_t salt) {
    const StateGrid block = random_block(s, cfg.rows, cfg.cols, derive_seed(cfg.seed, {salt}));
    return program_grid(block, dist, derive_seed(cfg.seed, {salt, 1}));
  };
  const CellGrid conv_before = program(conv, 0);
  const CellGrid mod_before = program(mod, 1);
  r.conventional = apply_interference(conv_before, cfg.coupling, dist);
  r.modulated = apply_interference(mod_before, cfg.coupling, dist);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const CellGrid* g : {&r.conventional, &r.modulated}) {
    for (const auto* v : {&g->v_nominal, &g->v_actual}) {
      const auto [a, b] = std::minmax_element(v->begin(), v->end());
      lo = std::min(lo, *a);
      hi = std::max(hi, *b);
    }
  }
  lo = std::floor((lo - 0.5) / kThresholdBinWidth) * kThresholdBinWidth;
  r.axis = make_histogram({}, lo, hi + 0.5, kThresholdBinWidth);

  const auto series = [&](const std::string& label, const CellGrid& g,
                          const std::vector<double>& volts) {
    DistributionSeries s;
    s.label = label;
    s.per_level.assign(dist.num_levels(), std::vector<std::size_t>(r.axis.counts.size(), 0));
    Histogram h = r.axis;
    const auto levels = g.states.levels();
    for (std::size_t l = 0; l < dist.num_levels(); ++l) {
      std::fill(h.counts.begin(), h.counts.end(), 0);
      for (std::size_t c = 0; c < levels.size(); ++c)
        if (levels[c] == l) h.add(volts[c]);
      s.per_level[l] = h.counts;
    }
    return s;
  };
  r.series.push_back(series("conv_before", r.conventional, r.conventional.v_nominal));
  r.series.push_back(series("conv_after", r.conventional, r.conventional.v_actual));
  r.series.push_back(series("mod_before", r.modulated, r.modulated.v_nominal));
  r.series.push_back(series("mod_after", r.modulated, r.modulated.v_actual));
  return r;
}

void write_distribution_csv(std::ostream& os, const DistributionResult& r) {
  os << "voltage_bin_center";
  for (const auto& s : r.series)
    for (std::size_t l = 0; l < s.per_level.size(); ++l) os << ',' << s.label << "_s" << l;
  os << '\n';
  for (std::size_t b = 0; b < r.axis.counts.size(); ++b) {
    os << fixed(r.axis.center(b), 3);
    for (const auto& s : r.series)
      for (const auto& level : s.per_level) os << ',' << level[b];
    os << '\n';
  }
}

std::map<double, double> e_cell_shift_mixture(const CellGrid& g) {
  std::map<double, std::size_t> counts;
  std::size_t e_cells = 0;
  const auto levels = g.states.levels();
  for (std::size_t c = 0; c < levels.size(); ++c) {
    if (levels[c] != 0) continue;
    ++counts[std::round(g.shift[c] * 1e9) / 1e9];
    ++e_cells;
  }
  std::map<double, double> out;
  for (const auto& [shift, n] : counts)
    out[shift] = static_cast<double>(n) / static_cast<double>(e_cells);
  return out;
}

// ---------------------------------------------------------------------------

SweepConfig::SweepConfig() {
  coupling = CouplingParams::effective(0.0, 0.0, 0.0, 2.0);
  coupling.gamma_x = 0.1;
}

void SweepConfig::validate() const {
  if (gamma_x_star.empty()) throw ConfigError("sweep: gamma_x_star grid is empty");
  for (std::size_t i = 0; i < gamma_x_star.size(); ++i) {
    if (!(gamma_x_star[i] >= 0.0)) throw ConfigError("sweep: gamma_x_star must be >= 0");
    if (i > 0 && !(gamma_x_star[i] > gamma_x_star[i - 1]))
      throw ConfigError("sweep: gamma_x_star grid must be strictly increasing");
  }
  if (trials == 0) throw ConfigError("sweep: trials must be >= 1");
  if (rows == 0) throw ConfigError("sweep: rows must be >= 1");
  if (codewords_per_page == 0) throw ConfigError("sweep: codewords_per_page must be >= 1");
  if (arms.empty()) throw ConfigError("sweep: no arms configured");
  try {
    coupling.validate();
    for (const auto& arm : arms) {
      scheme_preset(arm.scheme);
      ecc_preset(arm.ecc);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
}

std::vector<Arm> default_arms() {
  std::vector<Arm> arms{
      {"", "slc-conv", "conv-9/10", false},
      {"", "slc-conv", "conv-1/2", false},
      {"", "slc-conv", "conv-1/2", true},
      {"", "slc-rll", "mod-3/4", true},
      {"", "slc-rll", "mod-3/4", false},
  };
  for (auto& a : arms) a.label = arm_label(a);
  return arms;
}

std::string arm_label(const Arm& arm) {
  return arm.scheme + "+" + arm.ecc + (arm.interleave ? "+il" : "");
}

namespace {

bool parse_flag(const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected on/off, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw ConfigError("bad number '" + item + "'");
  }
  return out;
}

void reject_unknown(const boost::property_tree::ptree& section, const std::string& name,
                    const std::set<std::string>& known) {
  for (const auto& [key, _] : section)
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
}

// ptree's get(key, default) swallows conversion errors; this does not
template <class T>
void read_key(const boost::property_tree::ptree& section, const char* key, T& out) {
  if (section.count(key)) out = section.get<T>(key);
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  SweepConfig cfg;
  try {
    for (const auto& [name, section] : tree) {
      if (name == "sweep") {
        reject_unknown(section, name, {"gamma_x_star", "trials", "rows", "codewords_per_page",
                                       "seed", "threads", "out"});
        if (auto v = section.get_optional<std::string>("gamma_x_star"))
          cfg.gamma_x_star = parse_list(*v);
        read_key(section, "trials", cfg.trials);
        read_key(section, "rows", cfg.rows);
        read_key(section, "codewords_per_page", cfg.codewords_per_page);
        read_key(section, "seed", cfg.seed);
        read_key(section, "threads", cfg.threads);
        read_key(section, "out", cfg.out);
      } else if (name == "coupling") {
        reject_unknown(section, name, {"alpha", "beta", "gamma_x", "gamma_y", "gamma_xy"});
        read_key(section, "alpha", cfg.coupling.alpha);
        read_key(section, "beta", cfg.coupling.beta);
        read_key(section, "gamma_x", cfg.coupling.gamma_x);
        read_key(section, "gamma_y", cfg.coupling.gamma_y);
        read_key(section, "gamma_xy", cfg.coupling.gamma_xy);
      } else if (name.rfind("arm.", 0) == 0) {
        reject_unknown(section, name, {"scheme", "ecc", "interleave"});
        Arm arm;
        arm.label = name.substr(4);
        arm.scheme = section.get<std::string>("scheme");
        arm.ecc = section.get<std::string>("ecc");
        arm.interleave = parse_flag(section.get<std::string>("interleave", "off"));
        cfg.arms.push_back(arm);
      } else {
        throw ConfigError("unknown section [" + name + "]");
      }
    }
  } catch (const pt::ptree_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.arms.empty()) cfg.arms = default_arms();
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_sweep_config(in);
}

WilsonInterval wilson_interval(std::size_t failures, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(failures) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SchemeConfig arm_config(const Arm& arm, const SweepConfig& sweep) {
  SchemeConfig cfg = scheme_preset(arm.scheme);
  cfg.ecc = PageLayout{sweep.codewords_per_page, ecc_preset(arm.ecc)};
  cfg.interleave_enabled = arm.interleave;
  cfg.rows = sweep.rows;
  cfg.coupling = sweep.coupling;
  cfg.coupling.delta_v_e_ph = aggressor_shift(top_of(cfg.m_bits), cfg.dist);
  return cfg;
}

namespace {

struct TrialCounts {
  std::size_t codewords = 0;
  std::size_t failures = 0;
};

TrialCounts run_trial(const SchemeConfig& cfg, std::uint64_t seed) {
  const auto page_bits = page_user_bits(cfg);
  std::vector<WriteRecord> records;
  std::vector<Level> levels;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < cfg.rows; ++r) {
    std::vector<BitString> data;
    for (std::size_t p = 0; p < page_bits.size(); ++p)
      data.push_back(random_bits(page_bits[p], derive_seed(seed, {1, r, p})));
    auto written = encode_write(data, cfg, derive_seed(seed, {2, r}));
    cols = written.row.cols();
    levels.insert(levels.end(), written.record.levels.begin(), written.record.levels.end());
    records.push_back(std::move(written.record));
  }
  const StateGrid block(cfg.m_bits, cfg.rows, cols, std::move(levels));
  const CellGrid programmed = program_grid(block, cfg.dist, derive_seed(seed, {3}));
  const CellGrid disturbed = apply_interference(programmed, cfg.coupling, cfg.dist);
  const auto thresholds = estimate_thresholds(disturbed.v_actual, cfg.dist);
  const StateGrid read = read_hard(disturbed, thresholds);

  TrialCounts counts;
  for (std::size_t r = 0; r < cfg.rows; ++r) {
    const auto result = decode_read(read.row(r), records[r], cfg);
    counts.codewords += result.codewords;
    counts.failures += result.failures;
  }
  return counts;
}

}  // namespace

SweepRow run_point(const SchemeConfig& cfg, std::size_t trials, std::uint64_t base_seed,
                   unsigned threads) {
  cfg.validate();
  if (!cfg.ecc) throw std::invalid_argument("run_point: configuration needs an ECC layout");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> codewords{0};
  std::atomic<std::size_t> failures{0};
  std::exception_ptr error;
  std::mutex error_mu;
  const auto worker = [&] {
    try {
      for (std::size_t t = next++; t < trials; t = next++) {
        const auto c = run_trial(cfg, base_seed + t);
        codewords += c.codewords;
        failures += c.failures;
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next = trials;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  SweepRow row;
  row.trials = trials;
  row.codewords = codewords;
  row.failures = failures;
  row.wer = row.codewords ? static_cast<double>(row.failures) / static_cast<double>(row.codewords) : 0.0;
  row.ci = wilson_interval(row.failures, row.codewords);
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (const auto& arm : cfg.arms) {
    const SchemeConfig base = arm_config(arm, cfg);
    for (double g : cfg.gamma_x_star) {
      SchemeConfig point = base;
      point.coupling = base.coupling.with_effective_x(g);
      SweepRow row = run_point(point, cfg.trials, cfg.seed, cfg.threads);
      row.gamma_x_star = g;
      row.scheme = arm.label.empty() ? arm_label(arm) : arm.label;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "gamma_x_star,scheme,wer,trials,wilson_interval_low,wilson_interval_high\n";
  for (const auto& r : rows) {
    os << fixed(r.gamma_x_star, 4) << ',' << r.scheme << ',' << fixed(r.wer, 6) << ','
       << r.trials << ',' << fixed(r.ci.low, 6) << ',' << fixed(r.ci.high, 6) << '\n';
  }
}

}  // namespace flashmod
