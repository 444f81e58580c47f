#include "flashmod/rll.hpp"

#include <array>

namespace flashmod {
namespace {

// Indexed by the 2-bit data value (first bit is the MSB).
constexpr std::array<std::array<Bit, 3>, 4> kBasic{{
    {1, 0, 1},
    {1, 0, 0},
    {0, 0, 1},
    {0, 1, 0},
}};

// Current pair in {00, 10} and next pair in {00, 01}.
bool substitution_needed(Bit current_lsb, Bit next_msb) {
  return current_lsb == 0 && next_msb == 0;
}

// Index of the basic codeword closest to the group; ties go to the lower
// table index.
int nearest_basic(Bit g0, Bit g1, Bit g2) {
  int best = 0;
  int best_dist = 4;
  for (int i = 0; i < 4; ++i) {
    int dist = (kBasic[i][0] != g0) + (kBasic[i][1] != g1) + (kBasic[i][2] != g2);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace

BitString rll17_encode(std::span<const Bit> data) {
  if (data.size() % 2 != 0)
    throw LengthError("rll17_encode: data length must be even");
  BitString out;
  out.reserve(data.size() / 2 * 3);
  std::size_t i = 0;
  while (i < data.size()) {
    const Bit a0 = data[i];
    const Bit a1 = data[i + 1];
    if (i + 3 < data.size() && substitution_needed(a1, data[i + 2])) {
      // The substitution word starts with the basic group of (a0, b1) and
      // ends in 000.
      const auto& head = kBasic[(a0 << 1) | data[i + 3]];
      out.insert(out.end(), head.begin(), head.end());
      out.insert(out.end(), 3, 0);
      i += 4;
    } else {
      const auto& word = kBasic[(a0 << 1) | a1];
      out.insert(out.end(), word.begin(), word.end());
      i += 2;
    }
  }
  return out;
}

BitString rll17_decode(std::span<const Bit> coded) {
  if (coded.size() % 3 != 0)
    throw LengthError("rll17_decode: coded length must be a multiple of 3");
  BitString out;
  out.reserve(coded.size() / 3 * 2);
  std::size_t i = 0;
  while (i < coded.size()) {
    const int idx = nearest_basic(coded[i], coded[i + 1], coded[i + 2]);
    const Bit hi = static_cast<Bit>(idx >> 1);
    const Bit lo = static_cast<Bit>(idx & 1);
    const bool next_is_zero = i + 5 < coded.size() && coded[i + 3] == 0 &&
                              coded[i + 4] == 0 && coded[i + 5] == 0;
    if (next_is_zero) {
      out.insert(out.end(), {hi, 0, 0, lo});
      i += 6;
    } else {
      out.push_back(hi);
      out.push_back(lo);
      i += 3;
    }
  }
  return out;
}

bool satisfies_dk(std::span<const Bit> bits, int d, int k) {
  long run = 0;
  bool seen_one = false;
  for (Bit b : bits) {
    if (b) {
      if (seen_one && run < d) return false;
      seen_one = true;
      run = 0;
    } else if (++run > k) {
      return false;
    }
  }
  return true;
}

BitString nrzi_encode(std::span<const Bit> bits, Bit init) {
  BitString out(bits.size());
  Bit level = init;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    level ^= bits[i];
    out[i] = level;
  }
  return out;
}

BitString nrzi_decode(std::span<const Bit> levels, Bit init) {
  BitString out(levels.size());
  Bit prev = init;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out[i] = levels[i] ^ prev;
    prev = levels[i];
  }
  return out;
}

}  // namespace flashmod
