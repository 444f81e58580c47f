#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flashmod {

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

/// Cell program level; 0 is the erase state (E), 2^M - 1 the highest
/// program state (PH).
using Level = std::uint8_t;

class LengthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Parses a string of '0'/'1' characters. Spaces are skipped.
BitString bits_from_string(std::string_view text);
std::string to_string(std::span<const Bit> bits);

/// Number of positions where the two strings differ. Lengths must match.
std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b);

/// Big-endian unsigned value of a chunk of at most 64 bits.
std::uint64_t bits_to_uint(std::span<const Bit> bits);
void append_uint(BitString& out, std::uint64_t value, int width);

}  // namespace flashmod
