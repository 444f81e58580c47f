#include "flashmod/pipeline.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "flashmod/capacity.hpp"
#include "flashmod/rll.hpp"
#include "flashmod/seed.hpp"

namespace flashmod {

GrayMap::GrayMap(int m_bits) : m_bits_(m_bits) {
  if (m_bits < 1 || m_bits > 4) throw RangeError("GrayMap: m_bits must be in [1, 4]");
  const unsigned q = 1u << m_bits;
  labels_.resize(q);
  inverse_.resize(q);
  for (unsigned l = 0; l < q; ++l) {
    labels_[l] = ~(l ^ (l >> 1)) & (q - 1);
    inverse_[labels_[l]] = static_cast<Level>(l);
  }
}

GrayMap gray_map(int m_bits) { return GrayMap(m_bits); }

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Conventional: return "conventional";
    case Scheme::SlcRllNrzi: return "slc-rll-nrzi";
    case Scheme::MlcBinaryRll: return "mlc-binary-rll";
    case Scheme::MlcMaryCodebook: return "mlc-mary-codebook";
  }
  return "unknown";
}

void SchemeConfig::validate() const {
  if (m_bits < 1 || m_bits > 4) throw std::invalid_argument("SchemeConfig: m_bits must be in [1, 4]");
  if (scheme == Scheme::SlcRllNrzi && m_bits != 1)
    throw std::invalid_argument("SchemeConfig: the RLL/NRZI scheme requires M = 1");
  if (scheme == Scheme::MlcBinaryRll && m_bits < 2)
    throw std::invalid_argument("SchemeConfig: the binary-RLL MLC scheme requires M >= 2");
  if (scheme == Scheme::MlcMaryCodebook) {
    if (!codebook) throw std::invalid_argument("SchemeConfig: codebook missing");
    if (codebook->m_bits() != m_bits)
      throw std::invalid_argument("SchemeConfig: codebook M does not match");
  }
  if (ecc) {
    ecc->params.validate();
    if (ecc->codewords_per_page == 0)
      throw std::invalid_argument("SchemeConfig: codewords_per_page must be >= 1");
  }
  if (dist.num_levels() != (std::size_t{1} << m_bits))
    throw std::invalid_argument("SchemeConfig: distribution must have 2^M levels");
  if (rows == 0) throw std::invalid_argument("SchemeConfig: rows must be >= 1");
  coupling.validate();
}

namespace {

struct CodebookSpec {
  int m_bits;
  int word_len;
  int data_bits;
  BoundaryPolicy policy;
};

const std::map<std::string, CodebookSpec>& codebook_specs() {
  static const std::map<std::string, CodebookSpec> specs{
      {"mlc2-q-cb1", {2, 5, 8, BoundaryPolicy::exclude_level_at_ends(0)}},
      {"mlc2-q-cb1-alt", {2, 5, 8, BoundaryPolicy::exclude_level_at_ends(3)}},
      {"mlc2-q-cb2", {2, 5, 9, BoundaryPolicy::exclude_extremes_at_both_ends()}},
      {"mlc3-8ary-8_9", {3, 3, 8, BoundaryPolicy::exclude_level_at_ends(0)}},
      {"mlc3-8ary-11_12", {3, 4, 11, BoundaryPolicy::exclude_level_at_ends(0)}},
      {"mlc3-8ary-14_15", {3, 5, 14, BoundaryPolicy::exclude_level_at_ends(0)}},
  };
  return specs;
}

struct SchemeSpec {
  Scheme scheme;
  int m_bits;
  const char* ecc;
};

const std::map<std::string, SchemeSpec>& scheme_specs() {
  static const std::map<std::string, SchemeSpec> specs{
      {"slc-conv", {Scheme::Conventional, 1, "conv-1/2"}},
      {"mlc2-conv", {Scheme::Conventional, 2, "conv-1/2"}},
      {"mlc3-conv", {Scheme::Conventional, 3, "conv-1/2"}},
      {"slc-rll", {Scheme::SlcRllNrzi, 1, "mod-3/4"}},
      {"mlc2-binrll", {Scheme::MlcBinaryRll, 2, "mod-3/4"}},
      {"mlc3-binrll", {Scheme::MlcBinaryRll, 3, "mod-3/4"}},
      {"mlc2-q-cb1", {Scheme::MlcMaryCodebook, 2, "mod-3/4"}},
      {"mlc2-q-cb1-alt", {Scheme::MlcMaryCodebook, 2, "mod-3/4"}},
      {"mlc2-q-cb2", {Scheme::MlcMaryCodebook, 2, "mod-3/4"}},
      {"mlc3-8ary-8_9", {Scheme::MlcMaryCodebook, 3, "mod-3/4"}},
      {"mlc3-8ary-11_12", {Scheme::MlcMaryCodebook, 3, "mod-3/4"}},
      {"mlc3-8ary-14_15", {Scheme::MlcMaryCodebook, 3, "mod-3/4"}},
  };
  return specs;
}

}  // namespace

std::shared_ptr<const Codebook> codebook_preset(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Codebook>> cache;

  const auto it = codebook_specs().find(name);
  if (it == codebook_specs().end())
    throw std::invalid_argument("unknown codebook preset '" + name + "'");
  std::lock_guard lock(mu);
  auto& slot = cache[name];
  if (!slot) {
    const auto& s = it->second;
    slot = std::make_shared<const Codebook>(
        Codebook::build(s.m_bits, s.word_len, s.data_bits, s.policy));
  }
  return slot;
}

std::vector<std::string> codebook_preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : codebook_specs()) names.push_back(name);
  return names;
}

SchemeConfig scheme_preset(const std::string& name) {
  const auto it = scheme_specs().find(name);
  if (it == scheme_specs().end())
    throw std::invalid_argument("unknown scheme preset '" + name + "'");
  const auto& s = it->second;
  SchemeConfig cfg;
  cfg.scheme = s.scheme;
  cfg.m_bits = s.m_bits;
  if (s.scheme == Scheme::MlcMaryCodebook) cfg.codebook = codebook_preset(name);
  cfg.ecc = PageLayout{16, ecc_preset(s.ecc)};
  cfg.interleave_enabled = s.scheme != Scheme::Conventional;
  cfg.dist = StateDistribution::defaults_for(s.m_bits);
  cfg.coupling.delta_v_e_ph = aggressor_shift(static_cast<Level>((1u << s.m_bits) - 1), cfg.dist);
  return cfg;
}

std::vector<std::string> scheme_preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : scheme_specs()) names.push_back(name);
  return names;
}

RowGeometry row_geometry(const SchemeConfig& cfg) {
  if (!cfg.ecc) throw std::invalid_argument("row_geometry: configuration has no ECC layout");
  const std::size_t n = cfg.ecc->params.n;
  const std::size_t cw = cfg.ecc->codewords_per_page;
  const std::size_t m = static_cast<std::size_t>(cfg.m_bits);
  RowGeometry g;
  switch (cfg.scheme) {
    case Scheme::Conventional:
      g.cols = cw * n;
      g.codewords_per_page.assign(m, cw);
      g.pad_bits.assign(m, 0);
      break;
    case Scheme::SlcRllNrzi: {
      const std::size_t pad = (cw * n) % 2;
      g.cols = (cw * n + pad) / 2 * 3;
      g.codewords_per_page = {cw};
      g.pad_bits = {pad};
      break;
    }
    case Scheme::MlcBinaryRll: {
      const std::size_t pad = (cw * n) % 2;
      g.cols = (cw * n + pad) / 2 * 3;
      g.codewords_per_page.assign(m, g.cols / n);
      g.pad_bits.assign(m, g.cols % n);
      g.codewords_per_page.back() = cw;
      g.pad_bits.back() = pad;
      break;
    }
    case Scheme::MlcMaryCodebook: {
      const auto b = static_cast<std::size_t>(cfg.codebook->data_bits());
      const std::size_t bits = m * cw * n;
      const std::size_t pad = (b - bits % b) % b;
      g.cols = (bits + pad) / b * static_cast<std::size_t>(cfg.codebook->word_len());
      g.codewords_per_page.assign(m, cw);
      g.pad_bits = {pad};
      break;
    }
  }
  return g;
}

std::vector<std::size_t> page_user_bits(const SchemeConfig& cfg) {
  const RowGeometry g = row_geometry(cfg);
  std::vector<std::size_t> bits;
  for (std::size_t c : g.codewords_per_page) bits.push_back(c * cfg.ecc->params.k);
  return bits;
}

namespace {

void append_filler(BitString& stream, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) stream.push_back(static_cast<Bit>(rng() & 1u));
}

BitString join(std::span<const BitString> parts) {
  BitString out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// ECC-encodes one page worth of user bits into codewords.
std::vector<BitString> encode_page(std::span<const Bit> user, const EccParams& p,
                                   std::size_t page, std::uint64_t seed) {
  std::vector<BitString> cws;
  for (std::size_t i = 0; i * p.k < user.size(); ++i)
    cws.push_back(ecc_encode_model(user.subspan(i * p.k, p.k), p, derive_seed(seed, {page, i})));
  return cws;
}

BitString arrange(std::span<const BitString> codewords, bool interleave_enabled) {
  return interleave_enabled ? interleave(codewords) : join(codewords);
}

std::vector<BitString> split_codewords(std::span<const Bit> stream, std::size_t count,
                                       std::size_t n, bool interleave_enabled) {
  const auto body = stream.first(count * n);
  if (interleave_enabled) return deinterleave(body, count);
  std::vector<BitString> out;
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back(body.begin() + i * n, body.begin() + (i + 1) * n);
  return out;
}

std::vector<Level> levels_from_pages(std::span<const BitString> pages, const GrayMap& gray,
                                     std::size_t cols) {
  std::vector<Level> levels(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    unsigned label = 0;
    for (const auto& page : pages) label = (label << 1) | page[j];
    levels[j] = gray.level_of(label);
  }
  return levels;
}

BitString page_bits(std::span<const Level> levels, const GrayMap& gray, int page) {
  BitString out(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) out[j] = gray.bit(levels[j], page);
  return out;
}

}  // namespace

WriteResult encode_write(std::span<const BitString> user_data, const SchemeConfig& cfg,
                         std::uint64_t seed) {
  cfg.validate();
  const auto m = static_cast<std::size_t>(cfg.m_bits);
  if (user_data.size() != m)
    throw LengthError("encode_write: expected one data string per page (" + std::to_string(m) + ")");

  const GrayMap gray(cfg.m_bits);
  WriteRecord rec;
  for (const auto& d : user_data) rec.user_bits.push_back(d.size());

  if (cfg.ecc) {
    const RowGeometry geom = row_geometry(cfg);
    const auto expected = page_user_bits(cfg);
    for (std::size_t p = 0; p < m; ++p) {
      if (user_data[p].size() != expected[p])
        throw LengthError("encode_write: page " + std::to_string(p + 1) + " needs " +
                          std::to_string(expected[p]) + " user bits");
      rec.codewords.push_back(encode_page(user_data[p], cfg.ecc->params, p, seed));
    }
    if (cfg.scheme == Scheme::MlcMaryCodebook) {
      std::vector<BitString> all;
      for (const auto& page : rec.codewords) all.insert(all.end(), page.begin(), page.end());
      rec.page_streams.push_back(arrange(all, cfg.interleave_enabled));
      append_filler(rec.page_streams.back(), geom.pad_bits[0], derive_seed(seed, {~0ULL, 0}));
    } else {
      for (std::size_t p = 0; p < m; ++p) {
        rec.page_streams.push_back(arrange(rec.codewords[p], cfg.interleave_enabled));
        append_filler(rec.page_streams.back(), geom.pad_bits[p], derive_seed(seed, {~0ULL, p}));
      }
    }
  } else {
    if (cfg.scheme == Scheme::MlcMaryCodebook) {
      rec.page_streams.push_back(join(user_data));
    } else {
      rec.page_streams.assign(user_data.begin(), user_data.end());
    }
  }

  switch (cfg.scheme) {
    case Scheme::Conventional: {
      std::size_t cols = 0;
      for (const auto& s : rec.page_streams) cols = std::max(cols, s.size());
      for (auto& s : rec.page_streams) s.resize(cols, 1);
      rec.levels = levels_from_pages(rec.page_streams, gray, cols);
      break;
    }
    case Scheme::SlcRllNrzi: {
      rec.modulated.push_back(nrzi_encode(rll17_encode(rec.page_streams[0]), 0));
      rec.levels = levels_from_pages(rec.modulated, gray, rec.modulated[0].size());
      break;
    }
    case Scheme::MlcBinaryRll: {
      BitString coded = rll17_encode(rec.page_streams.back());
      const std::size_t cols = coded.size();
      std::vector<BitString> pages;
      for (std::size_t p = 0; p + 1 < m; ++p) {
        BitString page = rec.page_streams[p];
        if (page.size() > cols)
          throw LengthError("encode_write: page " + std::to_string(p + 1) +
                            " is longer than the coded last page");
        page.resize(cols, 1);
        pages.push_back(std::move(page));
      }
      pages.push_back(coded);
      rec.modulated = pages;
      rec.levels = levels_from_pages(pages, gray, cols);
      break;
    }
    case Scheme::MlcMaryCodebook:
      rec.levels = cfg.codebook->encode(rec.page_streams[0]);
      break;
  }

  WriteResult out{StateGrid::single_row(cfg.m_bits, rec.levels), std::move(rec)};
  return out;
}

ReadResult decode_read(std::span<const Level> levels, const WriteRecord& record,
                       const SchemeConfig& cfg) {
  if (levels.size() != record.levels.size())
    throw LengthError("decode_read: row length does not match the write record");
  const auto m = static_cast<std::size_t>(cfg.m_bits);
  const GrayMap gray(cfg.m_bits);

  // Undo the modulation layer, recovering the page streams.
  std::vector<BitString> streams;
  switch (cfg.scheme) {
    case Scheme::Conventional:
      for (std::size_t p = 0; p < m; ++p) streams.push_back(page_bits(levels, gray, static_cast<int>(p)));
      break;
    case Scheme::SlcRllNrzi:
      streams.push_back(rll17_decode(nrzi_decode(page_bits(levels, gray, 0), 0)));
      break;
    case Scheme::MlcBinaryRll:
      for (std::size_t p = 0; p + 1 < m; ++p) streams.push_back(page_bits(levels, gray, static_cast<int>(p)));
      streams.push_back(rll17_decode(page_bits(levels, gray, static_cast<int>(m - 1))));
      break;
    case Scheme::MlcMaryCodebook:
      streams.push_back(cfg.codebook->decode(levels));
      break;
  }

  ReadResult out;
  if (!cfg.ecc) {
    if (cfg.scheme == Scheme::MlcMaryCodebook) {
      std::size_t at = 0;
      for (std::size_t bits : record.user_bits) {
        out.user_data.emplace_back(streams[0].begin() + at, streams[0].begin() + at + bits);
        at += bits;
      }
    } else {
      for (std::size_t p = 0; p < m; ++p) {
        streams[p].resize(record.user_bits[p]);
        out.user_data.push_back(std::move(streams[p]));
      }
    }
    return out;
  }

  const EccParams& ep = cfg.ecc->params;
  std::vector<std::vector<BitString>> received;
  if (cfg.scheme == Scheme::MlcMaryCodebook) {
    std::size_t total = 0;
    for (const auto& page : record.codewords) total += page.size();
    auto all = split_codewords(streams[0], total, ep.n, cfg.interleave_enabled);
    std::size_t at = 0;
    for (const auto& page : record.codewords) {
      received.emplace_back(all.begin() + at, all.begin() + at + page.size());
      at += page.size();
    }
  } else {
    for (std::size_t p = 0; p < m; ++p)
      received.push_back(split_codewords(streams[p], record.codewords[p].size(), ep.n,
                                         cfg.interleave_enabled));
  }

  for (std::size_t p = 0; p < m; ++p) {
    BitString data;
    std::vector<bool> ok;
    for (std::size_t i = 0; i < record.codewords[p].size(); ++i) {
      const auto r = ecc_decode_model(received[p][i], record.codewords[p][i], ep);
      data.insert(data.end(), r.info.begin(), r.info.end());
      ok.push_back(r.success);
      ++out.codewords;
      out.failures += !r.success;
    }
    out.user_data.push_back(std::move(data));
    out.success.push_back(std::move(ok));
  }
  return out;
}

RateSummary rate_accounting(const SchemeConfig& cfg) {
  const double m = cfg.m_bits;
  const double rll_rate = 2.0 / 3.0;
  const double rll_cap = rll_capacity({1, std::nullopt}).capacity;
  RateSummary r;
  switch (cfg.scheme) {
    case Scheme::Conventional:
      r.modulation_rate = 1.0;
      r.capacity = 1.0;
      break;
    case Scheme::SlcRllNrzi:
      r.modulation_rate = rll_rate;
      r.capacity = rll_cap;
      break;
    case Scheme::MlcBinaryRll:
      r.modulation_rate = ((m - 1.0) + rll_rate) / m;
      r.capacity = ((m - 1.0) + rll_cap) / m;
      break;
    case Scheme::MlcMaryCodebook:
      if (!cfg.codebook) throw std::invalid_argument("rate_accounting: codebook missing");
      r.modulation_rate = cfg.codebook->rate();
      r.capacity = mary_capacity(build_transition_spec(cfg.m_bits)).capacity;
      break;
  }
  r.overall_rate = r.modulation_rate * (cfg.ecc ? cfg.ecc->params.rate() : 1.0);
  return r;
}

}  // namespace flashmod
