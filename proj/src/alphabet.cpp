#include "ordemb/alphabet.hpp"

#include <fstream>
#include <stdexcept>

namespace ordemb {

std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (c0 < 0x80) {
      cp = c0;
      len = 1;
    } else if ((c0 & 0xe0) == 0xc0) {
      cp = c0 & 0x1f;
      len = 2;
    } else if ((c0 & 0xf0) == 0xe0) {
      cp = c0 & 0x0f;
      len = 3;
    } else if ((c0 & 0xf8) == 0xf0) {
      cp = c0 & 0x07;
      len = 4;
    } else {
      ++i;  // stray continuation byte
      continue;
    }
    if (i + len > s.size()) {
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char ck = static_cast<unsigned char>(s[i + k]);
      if ((ck & 0xc0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (ck & 0x3f);
    }
    if (!ok) {
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }
  return out;
}

Alphabet::Alphabet(std::vector<char32_t> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() != kAlphabetSize) {
    throw std::invalid_argument("alphabet must hold exactly " +
                                std::to_string(kAlphabetSize) + " characters, got " +
                                std::to_string(symbols_.size()));
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], i).second) {
      throw std::invalid_argument("alphabet has a duplicate character at position " +
                                  std::to_string(i));
    }
  }
}

Alphabet Alphabet::standard() {
  std::vector<char32_t> syms;
  syms.reserve(kAlphabetSize);
  for (char32_t c = U'a'; c <= U'z'; ++c) syms.push_back(c);
  for (char32_t c = U'0'; c <= U'9'; ++c) syms.push_back(c);
  syms.push_back(U' ');
  for (char32_t c = 0x21; c <= 0x2f; ++c) syms.push_back(c);  // ! " # $ % & ' ( ) * + , - . /
  for (char32_t c = 0x3a; c <= 0x40; ++c) syms.push_back(c);  // : ; < = > ? @
  for (char32_t c = 0x5b; c <= 0x60; ++c) syms.push_back(c);  // [ \ ] ^ _ `
  for (char32_t c = 0x7b; c <= 0x7e; ++c) syms.push_back(c);  // { | } ~
  syms.push_back(0xa3);    // pound sign
  syms.push_back(0x20ac);  // euro sign
  syms.push_back(0xb0);    // degree sign
  return Alphabet(std::move(syms));
}

Alphabet Alphabet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open alphabet file: " + path);
  }
  std::vector<char32_t> syms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::u32string cps = utf8_decode(line);
    if (cps.size() != 1) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected exactly one character per line");
    }
    syms.push_back(cps[0]);
  }
  if (syms.size() != kAlphabetSize) {
    throw std::runtime_error(path + ": expected " + std::to_string(kAlphabetSize) +
                             " lines, got " + std::to_string(syms.size()));
  }
  return Alphabet(std::move(syms));
}

void Alphabet::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write alphabet file: " + path);
  }
  for (char32_t c : symbols_) {
    out << utf8_encode(std::u32string(1, c)) << '\n';
  }
}

std::optional<std::size_t> Alphabet::index_of(char32_t c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CharText encode_chars(const std::string& text, const Alphabet& alphabet,
                      std::size_t max_length) {
  std::u32string kept;
  for (char32_t cp : utf8_decode(text)) {
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
    if (alphabet.index_of(cp).has_value()) {
      kept.push_back(cp);
      if (kept.size() >= max_length) break;
    }
  }
  if (kept.empty()) {
    throw std::invalid_argument("caption has no in-alphabet characters: \"" + text + "\"");
  }
  CharText ct;
  ct.length = kept.size();
  ct.chars = kept;
  ct.onehot = Tensor({kept.size(), alphabet.size()});
  auto& v = ct.onehot.values();
  for (std::size_t r = 0; r < kept.size(); ++r) {
    v[r * alphabet.size() + *alphabet.index_of(kept[r])] = 1.0;
  }
  return ct;
}

}  // namespace ordemb
