#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "flashmod/bits.hpp"

namespace flashmod {

/// A fixed-length sequence of cell levels over the alphabet [0, 2^M - 1].
struct SymbolWord {
  int m_bits = 0;
  std::vector<Level> symbols;

  bool operator==(const SymbolWord&) const = default;
};

/// True if no two adjacent symbols form the pair {0, 2^M - 1}.
bool is_eph_free(std::span<const Level> symbols, int m_bits);

/// Junction rule applied to a codeword's first and last symbol.
class BoundaryPolicy {
 public:
  enum class Kind { ExcludeLevelAtEnds, ExcludeExtremesAtBothEnds };

  /// Drop words whose first or last symbol is `level` (0 or 2^M - 1).
  static BoundaryPolicy exclude_level_at_ends(Level level);
  /// Drop words whose first and last symbols are both in {0, 2^M - 1}.
  static BoundaryPolicy exclude_extremes_at_both_ends();

  Kind kind() const { return kind_; }
  Level level() const { return level_; }

  /// Throws RangeError if the excluded level is not an extreme of the
  /// M-bit alphabet.
  void validate(int m_bits) const;
  bool permits(Level first, Level last, int m_bits) const;

  /// Text form used by the codebook file header: `exclude-ends:<level>` or
  /// `exclude-extremes-both`.
  std::string name() const;
  static BoundaryPolicy parse(const std::string& text);

  bool operator==(const BoundaryPolicy&) const = default;

 private:
  Kind kind_ = Kind::ExcludeExtremesAtBothEnds;
  Level level_ = 0;
};

class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::size_t pool_size, std::size_t required);
  std::size_t pool_size() const { return pool_size_; }
  std::size_t required() const { return required_; }

 private:
  std::size_t pool_size_;
  std::size_t required_;
};

/// All E-PH-free words of `word_len` symbols with the given end symbols, in
/// lexicographic order.
std::vector<SymbolWord> enumerate_candidates(int m_bits, int word_len, Level first,
                                             Level last);

/// Union of enumerate_candidates over every (first, last) pair the policy
/// permits, lexicographically ordered.
std::vector<SymbolWord> candidate_pool(int m_bits, int word_len,
                                       const BoundaryPolicy& policy);

/// Fixed-length block code: data index i (a data_bits-wide big-endian chunk)
/// maps to words()[i]. Immutable after construction.
class Codebook {
 public:
  /// Takes the first 2^data_bits words of candidate_pool. Throws
  /// CapacityError if the pool is smaller than that.
  static Codebook build(int m_bits, int word_len, int data_bits,
                        const BoundaryPolicy& policy);

  /// Validates and adopts an explicit word list (used by import).
  static Codebook from_words(int m_bits, int word_len, int data_bits,
                             const BoundaryPolicy& policy,
                             std::vector<SymbolWord> words);

  int m_bits() const { return m_bits_; }
  int word_len() const { return word_len_; }
  int data_bits() const { return data_bits_; }
  const BoundaryPolicy& policy() const { return policy_; }
  const std::vector<SymbolWord>& words() const { return words_; }
  std::size_t pool_size() const { return pool_size_; }
  /// Modulation rate in data bits per stored bit: B / (M * L).
  double rate() const;

  /// Exact inverse lookup; -1 if the word is not a codeword.
  std::int64_t index_of(std::span<const Level> word) const;
  /// Data index of the codeword at smallest symbol-wise Hamming distance,
  /// lower index on ties.
  std::size_t nearest_index(std::span<const Level> word) const;

  /// Flat symbol stream for `data`, whose length must be a multiple of
  /// data_bits (LengthError otherwise).
  std::vector<Level> encode(std::span<const Bit> data) const;
  /// Inverse of encode over a flat stream. Non-codewords decode to
  /// nearest_index. LengthError if the stream is not a whole number of words.
  BitString decode(std::span<const Level> symbols) const;

  /// Line format: header `M=<m> L=<len> B=<bits> P=<policy>`, then one
  /// codeword per line as space-separated symbol digits in data-index order.
  void write(std::ostream& os) const;
  static Codebook read(std::istream& is);

 private:
  Codebook() = default;
  std::uint64_t key(std::span<const Level> word) const;
  void index_words();

  int m_bits_ = 0;
  int word_len_ = 0;
  int data_bits_ = 0;
  BoundaryPolicy policy_;
  std::size_t pool_size_ = 0;
  std::vector<SymbolWord> words_;
  std::unordered_map<std::uint64_t, std::uint32_t> inverse_;
};

/// List-of-words wrappers around Codebook::encode / decode.
std::vector<SymbolWord> codebook_encode(const Codebook& cb, std::span<const Bit> data);
BitString codebook_decode(const Codebook& cb, std::span<const SymbolWord> words);

}  // namespace flashmod
