#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flashmod/bits.hpp"

namespace flashmod {

/// Block-code geometry: n codeword bits, k information bits, t correctable
/// bit errors.
struct EccParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t t = 0;

  double rate() const { return static_cast<double>(k) / static_cast<double>(n); }
  /// Throws std::invalid_argument unless 0 < k < n.
  void validate() const;

  bool operator==(const EccParams&) const = default;
};

/// Named presets: "conv-9/10" (4551, 4096, 35), "conv-1/2" (8191, 4096, 366),
/// "mod-3/4" (5435, 4096, 105). Throws std::invalid_argument for other names.
EccParams ecc_preset(const std::string& name);
std::vector<std::string> ecc_preset_names();

struct PageLayout {
  std::size_t codewords_per_page = 16;
  EccParams params;
};

// Genie-aided stand-in for a BCH code. Encoding appends n - k pseudorandom
// parity bits derived from (info, seed); decoding succeeds exactly when the
// received word is within Hamming distance t of what was sent. Miscorrection
// is not modelled.

/// Throws LengthError unless info.size() == p.k.
BitString ecc_encode_model(std::span<const Bit> info, const EccParams& p,
                           std::uint64_t seed);

struct EccDecodeResult {
  BitString info;
  bool success = false;
  std::size_t errors = 0;
};

/// Throws LengthError unless both words have n bits.
EccDecodeResult ecc_decode_model(std::span<const Bit> received,
                                 std::span<const Bit> transmitted, const EccParams& p);

/// Block interleaver: the codewords are the rows of an array that is read
/// out column by column. All rows must have the same length (LengthError).
BitString interleave(std::span<const BitString> rows);

/// Inverse of interleave. Throws LengthError unless rows divides the stream
/// length.
std::vector<BitString> deinterleave(std::span<const Bit> stream, std::size_t rows);

}  // namespace flashmod
