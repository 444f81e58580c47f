#include "flashmod/bits.hpp"

namespace flashmod {

BitString bits_from_string(std::string_view text) {
  BitString out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(static_cast<Bit>(c - '0'));
    } else if (c != ' ') {
      throw std::invalid_argument("bits_from_string: unexpected character '" +
                                  std::string(1, c) + "'");
    }
  }
  return out;
}

std::string to_string(std::span<const Bit> bits) {
  std::string s;
  s.reserve(bits.size());
  for (Bit b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size())
    throw LengthError("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

std::uint64_t bits_to_uint(std::span<const Bit> bits) {
  std::uint64_t v = 0;
  for (Bit b : bits) v = (v << 1) | (b & 1u);
  return v;
}

void append_uint(BitString& out, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i)
    out.push_back(static_cast<Bit>((value >> i) & 1u));
}

}  // namespace flashmod
