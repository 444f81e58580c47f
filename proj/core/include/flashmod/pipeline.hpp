#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flashmod/channel.hpp"
#include "flashmod/codebook.hpp"
#include "flashmod/ecc.hpp"
#include "flashmod/epattern.hpp"

namespace flashmod {

/// Per-level page bits of an M-bit cell, page 1 first. Built as the
/// complement of the reflected binary Gray code, so adjacent levels differ
/// in one bit and both E and PH carry a 1 in the last page.
class GrayMap {
 public:
  /// Throws RangeError unless 1 <= m_bits <= 4.
  explicit GrayMap(int m_bits);

  int m_bits() const { return m_bits_; }
  /// Bit of `page` (0-based, page 1 = 0) for `level`.
  Bit bit(Level level, int page) const {
    return static_cast<Bit>((labels_[level] >> (m_bits_ - 1 - page)) & 1u);
  }
  /// Label as an M-bit integer, page 1 in the most significant position.
  unsigned label(Level level) const { return labels_[level]; }
  Level level_of(unsigned label) const { return inverse_[label]; }

 private:
  int m_bits_;
  std::vector<unsigned> labels_;
  std::vector<Level> inverse_;
};

GrayMap gray_map(int m_bits);

enum class Scheme {
  Conventional,     ///< ECC-coded pages Gray-mapped straight onto cells
  SlcRllNrzi,       ///< ECC -> (interleave) -> (1,7) RLL -> NRZI, M = 1
  MlcBinaryRll,     ///< last page (1,7) RLL coded, other pages uncoded
  MlcMaryCodebook,  ///< ECC-coded stream through a 2^M-ary block code
};

std::string to_string(Scheme s);

struct SchemeConfig {
  Scheme scheme = Scheme::Conventional;
  int m_bits = 1;
  std::shared_ptr<const Codebook> codebook;
  /// nullopt selects pass-through mode: no ECC, no interleaver.
  std::optional<PageLayout> ecc;
  bool interleave_enabled = false;
  CouplingParams coupling;
  StateDistribution dist = StateDistribution::slc_default();
  std::size_t rows = 1;  ///< word lines per simulated block

  /// Throws std::invalid_argument on scheme/M/codebook mismatches.
  void validate() const;
};

/// Presets: slc-conv, mlc2-conv, mlc3-conv, slc-rll, mlc2-binrll,
/// mlc3-binrll, mlc2-q-cb1, mlc2-q-cb1-alt, mlc2-q-cb2, mlc3-8ary-8_9,
/// mlc3-8ary-11_12, mlc3-8ary-14_15. Conventional presets default to the
/// conv-1/2 ECC, the others to mod-3/4. Codebooks are built once per process
/// and shared.
SchemeConfig scheme_preset(const std::string& name);
std::vector<std::string> scheme_preset_names();

/// Shared codebook for a codebook-carrying preset name (e.g. "mlc2-q-cb1").
std::shared_ptr<const Codebook> codebook_preset(const std::string& name);
std::vector<std::string> codebook_preset_names();

/// Physical layout of one word line under a configuration with ECC.
struct RowGeometry {
  std::size_t cols = 0;
  /// ECC codewords carried by each logical page. For the 2^M-ary scheme the
  /// pages share one stream; the entries still say how much user data each
  /// page holds.
  std::vector<std::size_t> codewords_per_page;
  /// Filler bits appended to each page stream to fill the row.
  std::vector<std::size_t> pad_bits;
};

/// Throws std::invalid_argument when cfg has no ECC layout.
RowGeometry row_geometry(const SchemeConfig& cfg);

/// User bits each page of one word line must carry (ECC mode only).
std::vector<std::size_t> page_user_bits(const SchemeConfig& cfg);

/// Everything the write side produced, kept for genie decoding and
/// diagnostics.
struct WriteRecord {
  std::vector<std::size_t> user_bits;             ///< per page, as supplied
  std::vector<std::vector<BitString>> codewords;  ///< per page (ECC mode)
  std::vector<BitString> page_streams;            ///< after ECC and interleaving
  std::vector<BitString> modulated;               ///< per page after RLL / NRZI
  std::vector<Level> levels;
};

struct WriteResult {
  StateGrid row;  ///< one word line
  WriteRecord record;
};

/// Encodes one word line. `user_data` has one entry per page (M entries).
/// In ECC mode each page must hold exactly page_user_bits(cfg)[p] bits; in
/// pass-through mode lengths follow the scheme's rate constraints and
/// pages shorter than the row are padded with ones.
WriteResult encode_write(std::span<const BitString> user_data, const SchemeConfig& cfg,
                         std::uint64_t seed);

struct ReadResult {
  std::vector<BitString> user_data;
  /// Per page, per ECC codeword; empty in pass-through mode.
  std::vector<std::vector<bool>> success;
  std::size_t codewords = 0;
  std::size_t failures = 0;
};

/// Inverse chain of encode_write. Throws LengthError if the row does not
/// match the record.
ReadResult decode_read(std::span<const Level> levels, const WriteRecord& record,
                       const SchemeConfig& cfg);

struct RateSummary {
  double modulation_rate = 1.0;
  double capacity = 1.0;
  double overall_rate = 1.0;
};

RateSummary rate_accounting(const SchemeConfig& cfg);

}  // namespace flashmod
