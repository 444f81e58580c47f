#pragma once

#include <span>

#include "flashmod/bits.hpp"

namespace flashmod {

// Rate 2/3 (d=1, k=7) run-length limited code with one-pair look-ahead.
//
// Each data pair maps to a 3-bit group from the basic table
//
//   00 -> 101   01 -> 100   10 -> 001   11 -> 010
//
// unless the pair is in {00, 10} and the following pair is in {00, 01}. Those
// four combinations would place two ones next to each other, so both pairs
// are replaced by a 6-bit substitution word ending in 000:
//
//   00 00 -> 101 000   00 01 -> 100 000
//   10 00 -> 001 000   10 01 -> 010 000
//
// The last pair of a block never looks ahead. Blocks (pages) are coded
// independently.

/// Throws LengthError on odd input length.
BitString rll17_encode(std::span<const Bit> data);

/// Inverse of rll17_encode. Invalid 3-bit groups (011, 110, 111, or a 000 in
/// group position) decode as the Hamming-nearest basic-table codeword, ties
/// resolved in table order, so corrupted input propagates errors instead of
/// failing. Throws LengthError when the length is not a multiple of 3.
BitString rll17_decode(std::span<const Bit> coded);

/// True if every pair of ones is separated by at least d and at most k zeros.
/// Leading and trailing zero runs are checked against k only.
bool satisfies_dk(std::span<const Bit> bits, int d, int k);

/// Differential precoding: out[i] = out[i-1] ^ in[i] with out[-1] = init.
BitString nrzi_encode(std::span<const Bit> bits, Bit init = 0);
BitString nrzi_decode(std::span<const Bit> levels, Bit init = 0);

}  // namespace flashmod
