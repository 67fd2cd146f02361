#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ordemb/tensor.hpp"

namespace ordemb {

inline constexpr std::size_t kAlphabetSize = 72;
inline constexpr std::size_t kDefaultCaptionMaxLength = 256;

// Best-effort UTF-8 decode; malformed bytes are skipped.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);

// Ordered set of exactly 72 characters with a reverse index. The shipped
// default is: a-z, 0-9, space, the 32 ASCII punctuation marks in code-point
// order, then the pound sign, euro sign and degree sign.
class Alphabet {
 public:
  explicit Alphabet(std::vector<char32_t> symbols);

  static Alphabet standard();
  // One character per line, exactly 72 lines, order significant. A line
  // holding a single space encodes the space character.
  static Alphabet load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t size() const { return symbols_.size(); }
  char32_t symbol_at(std::size_t i) const { return symbols_[i]; }
  std::optional<std::size_t> index_of(char32_t c) const;
  const std::vector<char32_t>& symbols() const { return symbols_; }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<char32_t> symbols_;
  std::unordered_map<char32_t, std::size_t> index_;
};

// One-hot character matrix over the alphabet: exactly one 1 per row.
struct CharText {
  Tensor onehot;        // [length x 72]
  std::size_t length = 0;
  std::u32string chars; // the filtered characters, in order
};

// Lowercases ASCII letters, drops characters outside the alphabet, truncates
// at max_length, and one-hot encodes the rest. Throws when nothing survives.
CharText encode_chars(const std::string& text, const Alphabet& alphabet,
                      std::size_t max_length = kDefaultCaptionMaxLength);

}  // namespace ordemb
