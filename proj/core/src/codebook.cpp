#include "flashmod/codebook.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

namespace flashmod {
namespace {

Level top_level(int m_bits) { return static_cast<Level>((1u << m_bits) - 1); }

void check_m_bits(int m_bits) {
  if (m_bits < 1 || m_bits > 4) throw RangeError("m_bits must be in [1, 4]");
}

// Depth-first extension in increasing symbol order yields lexicographic
// output without a sort.
void extend(std::vector<Level>& prefix, int word_len, Level last, Level top,
            std::vector<SymbolWord>& out, int m_bits) {
  const auto adjacent_ok = [top](Level a, Level b) {
    return !((a == 0 && b == top) || (a == top && b == 0));
  };
  if (static_cast<int>(prefix.size()) == word_len - 1) {
    if (adjacent_ok(prefix.back(), last)) {
      SymbolWord w{m_bits, prefix};
      w.symbols.push_back(last);
      out.push_back(std::move(w));
    }
    return;
  }
  for (int s = 0; s <= top; ++s) {
    const auto sym = static_cast<Level>(s);
    if (!adjacent_ok(prefix.back(), sym)) continue;
    prefix.push_back(sym);
    extend(prefix, word_len, last, top, out, m_bits);
    prefix.pop_back();
  }
}

}  // namespace

bool is_eph_free(std::span<const Level> symbols, int m_bits) {
  const Level top = top_level(m_bits);
  for (std::size_t i = 1; i < symbols.size(); ++i) {
    const Level a = symbols[i - 1];
    const Level b = symbols[i];
    if ((a == 0 && b == top) || (a == top && b == 0)) return false;
  }
  return true;
}

BoundaryPolicy BoundaryPolicy::exclude_level_at_ends(Level level) {
  BoundaryPolicy p;
  p.kind_ = Kind::ExcludeLevelAtEnds;
  p.level_ = level;
  return p;
}

BoundaryPolicy BoundaryPolicy::exclude_extremes_at_both_ends() { return {}; }

void BoundaryPolicy::validate(int m_bits) const {
  if (kind_ == Kind::ExcludeLevelAtEnds && level_ != 0 && level_ != top_level(m_bits))
    throw RangeError("BoundaryPolicy: excluded level must be 0 or 2^M-1");
}

bool BoundaryPolicy::permits(Level first, Level last, int m_bits) const {
  if (kind_ == Kind::ExcludeLevelAtEnds) return first != level_ && last != level_;
  const Level top = top_level(m_bits);
  const auto extreme = [top](Level s) { return s == 0 || s == top; };
  return !(extreme(first) && extreme(last));
}

std::string BoundaryPolicy::name() const {
  if (kind_ == Kind::ExcludeLevelAtEnds) return "exclude-ends:" + std::to_string(level_);
  return "exclude-extremes-both";
}

BoundaryPolicy BoundaryPolicy::parse(const std::string& text) {
  static const std::string kEnds = "exclude-ends:";
  if (text == "exclude-extremes-both") return exclude_extremes_at_both_ends();
  if (text.rfind(kEnds, 0) == 0) {
    const std::string num = text.substr(kEnds.size());
    if (!num.empty() && std::all_of(num.begin(), num.end(), [](unsigned char c) { return std::isdigit(c); })) {
      const int level = std::stoi(num);
      if (level <= 255) return exclude_level_at_ends(static_cast<Level>(level));
    }
  }
  throw std::invalid_argument("unknown boundary policy '" + text + "'");
}

CapacityError::CapacityError(std::size_t pool_size, std::size_t required)
    : std::runtime_error("codebook pool too small: " + std::to_string(pool_size) +
                         " candidates, " + std::to_string(required) + " required"),
      pool_size_(pool_size),
      required_(required) {}

std::vector<SymbolWord> enumerate_candidates(int m_bits, int word_len, Level first,
                                             Level last) {
  check_m_bits(m_bits);
  if (word_len < 2) throw LengthError("enumerate_candidates: word_len must be >= 2");
  if (m_bits * word_len > 64) throw LengthError("enumerate_candidates: word too long");
  const Level top = top_level(m_bits);
  if (first > top || last > top) throw RangeError("enumerate_candidates: bad end symbol");

  std::vector<SymbolWord> out;
  std::vector<Level> prefix{first};
  extend(prefix, word_len, last, top, out, m_bits);
  return out;
}

std::vector<SymbolWord> candidate_pool(int m_bits, int word_len,
                                       const BoundaryPolicy& policy) {
  check_m_bits(m_bits);
  policy.validate(m_bits);
  const Level top = top_level(m_bits);
  // Iterating first-major then last-major and concatenating is not
  // lexicographic (the last symbol varies slowest inside a first-block), so
  // the pool is sorted afterwards.
  std::vector<SymbolWord> pool;
  for (int f = 0; f <= top; ++f) {
    for (int l = 0; l <= top; ++l) {
      const auto first = static_cast<Level>(f);
      const auto last = static_cast<Level>(l);
      if (!policy.permits(first, last, m_bits)) continue;
      auto words = enumerate_candidates(m_bits, word_len, first, last);
      pool.insert(pool.end(), std::make_move_iterator(words.begin()),
                  std::make_move_iterator(words.end()));
    }
  }
  std::sort(pool.begin(), pool.end(), [](const SymbolWord& a, const SymbolWord& b) {
    return a.symbols < b.symbols;
  });
  return pool;
}

Codebook Codebook::build(int m_bits, int word_len, int data_bits,
                         const BoundaryPolicy& policy) {
  if (data_bits < 1 || data_bits > 24)
    throw RangeError("Codebook: data_bits must be in [1, 24]");
  auto pool = candidate_pool(m_bits, word_len, policy);
  const std::size_t required = std::size_t{1} << data_bits;
  if (pool.size() < required) throw CapacityError(pool.size(), required);

  Codebook cb;
  cb.m_bits_ = m_bits;
  cb.word_len_ = word_len;
  cb.data_bits_ = data_bits;
  cb.policy_ = policy;
  cb.pool_size_ = pool.size();
  pool.resize(required);
  cb.words_ = std::move(pool);
  cb.index_words();
  return cb;
}

Codebook Codebook::from_words(int m_bits, int word_len, int data_bits,
                              const BoundaryPolicy& policy,
                              std::vector<SymbolWord> words) {
  check_m_bits(m_bits);
  policy.validate(m_bits);
  if (word_len < 2 || m_bits * word_len > 64)
    throw LengthError("Codebook: word_len out of range");
  if (data_bits < 1 || data_bits > 24)
    throw RangeError("Codebook: data_bits must be in [1, 24]");
  const std::size_t required = std::size_t{1} << data_bits;
  if (words.size() != required)
    throw LengthError("Codebook: expected " + std::to_string(required) + " words, got " +
                      std::to_string(words.size()));
  const Level top = top_level(m_bits);
  for (const auto& w : words) {
    if (static_cast<int>(w.symbols.size()) != word_len)
      throw LengthError("Codebook: word of wrong length");
    if (std::any_of(w.symbols.begin(), w.symbols.end(), [top](Level s) { return s > top; }))
      throw RangeError("Codebook: symbol out of range");
    if (!is_eph_free(w.symbols, m_bits))
      throw std::invalid_argument("Codebook: word contains an E-PH adjacency");
    if (!policy.permits(w.symbols.front(), w.symbols.back(), m_bits))
      throw std::invalid_argument("Codebook: word violates boundary policy");
  }

  Codebook cb;
  cb.m_bits_ = m_bits;
  cb.word_len_ = word_len;
  cb.data_bits_ = data_bits;
  cb.policy_ = policy;
  cb.words_ = std::move(words);
  for (auto& w : cb.words_) w.m_bits = m_bits;
  cb.index_words();
  if (cb.inverse_.size() != cb.words_.size())
    throw std::invalid_argument("Codebook: duplicate words");
  cb.pool_size_ = candidate_pool(m_bits, word_len, policy).size();
  return cb;
}

double Codebook::rate() const {
  return static_cast<double>(data_bits_) / (m_bits_ * word_len_);
}

std::uint64_t Codebook::key(std::span<const Level> word) const {
  std::uint64_t k = 0;
  for (Level s : word) k = (k << m_bits_) | s;
  return k;
}

void Codebook::index_words() {
  inverse_.clear();
  inverse_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i)
    inverse_.emplace(key(words_[i].symbols), static_cast<std::uint32_t>(i));
}

std::int64_t Codebook::index_of(std::span<const Level> word) const {
  if (static_cast<int>(word.size()) != word_len_) return -1;
  const auto it = inverse_.find(key(word));
  return it == inverse_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t Codebook::nearest_index(std::span<const Level> word) const {
  if (static_cast<int>(word.size()) != word_len_)
    throw LengthError("Codebook: word has the wrong length");
  if (const auto exact = index_of(word); exact >= 0) return static_cast<std::size_t>(exact);
  std::size_t best = 0;
  int best_dist = word_len_ + 1;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    int dist = 0;
    for (int s = 0; s < word_len_; ++s) dist += (words_[i].symbols[s] != word[s]);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

std::vector<Level> Codebook::encode(std::span<const Bit> data) const {
  if (data.size() % data_bits_ != 0)
    throw LengthError("Codebook::encode: data length is not a multiple of data_bits");
  std::vector<Level> out;
  out.reserve(data.size() / data_bits_ * word_len_);
  for (std::size_t i = 0; i < data.size(); i += data_bits_) {
    const auto idx = bits_to_uint(data.subspan(i, data_bits_));
    const auto& w = words_[idx].symbols;
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

BitString Codebook::decode(std::span<const Level> symbols) const {
  if (symbols.size() % word_len_ != 0)
    throw LengthError("Codebook::decode: stream is not a whole number of words");
  BitString out;
  out.reserve(symbols.size() / word_len_ * data_bits_);
  for (std::size_t i = 0; i < symbols.size(); i += word_len_)
    append_uint(out, nearest_index(symbols.subspan(i, word_len_)), data_bits_);
  return out;
}

void Codebook::write(std::ostream& os) const {
  os << "M=" << m_bits_ << " L=" << word_len_ << " B=" << data_bits_
     << " P=" << policy_.name() << '\n';
  for (const auto& w : words_) {
    for (std::size_t s = 0; s < w.symbols.size(); ++s) {
      if (s) os << ' ';
      os << static_cast<int>(w.symbols[s]);
    }
    os << '\n';
  }
}

Codebook Codebook::read(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::invalid_argument("codebook file: missing header");
  int m = -1, len = -1, bits = -1;
  std::string policy_text;
  std::istringstream hs(header);
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("codebook file: bad header field");
    const std::string name = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (name == "M") m = std::stoi(value);
    else if (name == "L") len = std::stoi(value);
    else if (name == "B") bits = std::stoi(value);
    else if (name == "P") policy_text = value;
    else throw std::invalid_argument("codebook file: unknown header field " + name);
  }
  if (m < 0 || len < 0 || bits < 0 || policy_text.empty())
    throw std::invalid_argument("codebook file: incomplete header");

  std::vector<SymbolWord> words;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    SymbolWord w{m, {}};
    int s;
    while (ls >> s) {
      if (s < 0 || s > 255) throw RangeError("codebook file: symbol out of range");
      w.symbols.push_back(static_cast<Level>(s));
    }
    if (!ls.eof()) throw std::invalid_argument("codebook file: bad codeword line");
    words.push_back(std::move(w));
  }
  return from_words(m, len, bits, BoundaryPolicy::parse(policy_text), std::move(words));
}

std::vector<SymbolWord> codebook_encode(const Codebook& cb, std::span<const Bit> data) {
  const auto flat = cb.encode(data);
  std::vector<SymbolWord> out;
  out.reserve(flat.size() / cb.word_len());
  for (std::size_t i = 0; i < flat.size(); i += cb.word_len())
    out.push_back({cb.m_bits(), {flat.begin() + i, flat.begin() + i + cb.word_len()}});
  return out;
}

BitString codebook_decode(const Codebook& cb, std::span<const SymbolWord> words) {
  BitString out;
  out.reserve(words.size() * cb.data_bits());
  for (const auto& w : words) {
    if (static_cast<int>(w.symbols.size()) != cb.word_len())
      throw LengthError("codebook_decode: word has the wrong length");
    append_uint(out, cb.nearest_index(w.symbols), cb.data_bits());
  }
  return out;
}

}  // namespace flashmod
