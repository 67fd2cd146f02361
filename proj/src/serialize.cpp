#include "ordemb/serialize.hpp"

#include <stdexcept>

namespace ordemb {

namespace {
void read_bytes(std::istream& is, char* buf, std::size_t n) {
  is.read(buf, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) {
    throw std::runtime_error("unexpected end of stream");
  }
}
}  // namespace

std::uint32_t read_u32(std::istream& is) {
  char b[4];
  read_bytes(is, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  }
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  char b[8];
  read_bytes(is, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  }
  return v;
}

double read_f64(std::istream& is) { return std::bit_cast<double>(read_u64(is)); }

std::string read_string(std::istream& is, std::size_t max_len) {
  const std::uint32_t n = read_u32(is);
  if (n > max_len) {
    throw std::runtime_error("string length " + std::to_string(n) + " exceeds limit");
  }
  std::string s(n, '\0');
  if (n > 0) read_bytes(is, s.data(), n);
  return s;
}

void read_f64_array(std::istream& is, std::vector<double>& out, std::size_t count) {
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = read_f64(is);
}

}  // namespace ordemb
