#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "netpart/error.hpp"

// Little-endian primitives for the GAF dump and model checkpoint formats.
namespace netpart::binio {

inline void put_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

inline void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

inline std::uint8_t get_u8(std::istream& in) {
  const int c = in.get();
  if (!in) throw Error(ErrorKind::Format, "unexpected end of binary stream");
  return static_cast<std::uint8_t>(c);
}

inline std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(get_u8(in)) << (8 * i);
  return v;
}

inline double get_f64(std::istream& in) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(get_u8(in)) << (8 * i);
  return std::bit_cast<double>(bits);
}

inline void expect_magic(std::istream& in, const std::string& magic) {
  for (char expected : magic)
    if (static_cast<char>(get_u8(in)) != expected)
      throw Error(ErrorKind::Format, "bad magic, expected \"" + magic + "\"");
}

}  // namespace netpart::binio
