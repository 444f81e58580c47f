#include "flashmod/ecc.hpp"

#include <map>
#include <random>
#include <stdexcept>

#include "flashmod/seed.hpp"

namespace flashmod {
namespace {

const std::map<std::string, EccParams>& presets() {
  static const std::map<std::string, EccParams> table{
      {"conv-9/10", {4551, 4096, 35}},
      {"conv-1/2", {8191, 4096, 366}},
      {"mod-3/4", {5435, 4096, 105}},
  };
  return table;
}

}  // namespace

void EccParams::validate() const {
  if (k == 0 || k >= n) throw std::invalid_argument("EccParams: need 0 < k < n");
}

EccParams ecc_preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw std::invalid_argument("unknown ECC preset '" + name + "'");
  return it->second;
}

std::vector<std::string> ecc_preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

BitString ecc_encode_model(std::span<const Bit> info, const EccParams& p,
                           std::uint64_t seed) {
  p.validate();
  if (info.size() != p.k)
    throw LengthError("ecc_encode_model: info must have k = " + std::to_string(p.k) + " bits");

  std::uint64_t h = splitmix64(seed);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < info.size(); ++i) {
    word = (word << 1) | info[i];
    if (i % 64 == 63) {
      h = splitmix64(h ^ word);
      word = 0;
    }
  }
  h = splitmix64(h ^ word ^ info.size());

  BitString out(info.begin(), info.end());
  out.reserve(p.n);
  std::mt19937_64 rng(h);
  std::uint64_t pool = 0;
  int left = 0;
  for (std::size_t i = p.k; i < p.n; ++i) {
    if (left == 0) {
      pool = rng();
      left = 64;
    }
    out.push_back(static_cast<Bit>(pool & 1u));
    pool >>= 1;
    --left;
  }
  return out;
}

EccDecodeResult ecc_decode_model(std::span<const Bit> received,
                                 std::span<const Bit> transmitted, const EccParams& p) {
  if (received.size() != p.n || transmitted.size() != p.n)
    throw LengthError("ecc_decode_model: words must have n = " + std::to_string(p.n) + " bits");
  EccDecodeResult r;
  r.errors = hamming_distance(received, transmitted);
  r.success = r.errors <= p.t;
  const auto& source = r.success ? transmitted : received;
  r.info.assign(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(p.k));
  return r;
}

BitString interleave(std::span<const BitString> rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw LengthError("interleave: ragged rows");
  BitString out(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c * rows.size() + r] = rows[r][c];
  return out;
}

std::vector<BitString> deinterleave(std::span<const Bit> stream, std::size_t rows) {
  if (rows == 0 || stream.size() % rows != 0)
    throw LengthError("deinterleave: stream length must be a multiple of rows");
  const std::size_t cols = stream.size() / rows;
  std::vector<BitString> out(rows, BitString(cols));
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) out[r][c] = stream[c * rows + r];
  return out;
}

}  // namespace flashmod
