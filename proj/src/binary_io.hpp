#pragma once

// Little-endian stream helpers shared by the on-disk formats.

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "selbv/errors.hpp"

namespace selbv::io {

inline void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> bytes;
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

inline std::uint64_t read_u64(std::istream& in, std::string_view what) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw ParseError(ParseError::Kind::truncated, "truncated input reading " + std::string(what));
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes[i]} << (8 * i);
  return v;
}

inline std::uint32_t read_u32(std::istream& in, std::string_view what) {
  std::array<unsigned char, 4> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw ParseError(ParseError::Kind::truncated, "truncated input reading " + std::string(what));
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[i]} << (8 * i);
  return v;
}

inline void write_magic(std::ostream& out, std::string_view magic) {
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void expect_magic(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  if (!in.read(got.data(), static_cast<std::streamsize>(got.size()))) {
    throw ParseError(ParseError::Kind::truncated, "truncated input reading magic");
  }
  if (got != magic) {
    throw ParseError(ParseError::Kind::bad_magic,
                     "bad magic: expected " + std::string(magic));
  }
}

// Length-prefixed sections. Reading grows the vector in chunks so a corrupt
// length fails as truncation instead of one huge allocation.
template <class T, class Writer>
void write_section(std::ostream& out, std::vector<T> const& values, Writer write_one) {
  write_u64(out, values.size());
  for (T const& v : values) write_one(out, v);
}

template <class T, class Reader>
std::vector<T> read_values(std::istream& in, std::uint64_t count, Reader read_one) {
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;
  std::vector<T> values;
  values.reserve(count < kChunk ? count : kChunk);
  for (std::uint64_t i = 0; i < count; ++i) values.push_back(read_one(in));
  return values;
}

inline std::vector<std::uint64_t> read_u64_section(std::istream& in, std::string_view what) {
  std::uint64_t const count = read_u64(in, what);
  return read_values<std::uint64_t>(in, count, [&](std::istream& s) { return read_u64(s, what); });
}

inline std::vector<std::uint32_t> read_u32_section(std::istream& in, std::string_view what) {
  std::uint64_t const count = read_u64(in, what);
  return read_values<std::uint32_t>(in, count, [&](std::istream& s) { return read_u32(s, what); });
}

inline void write_u64_section(std::ostream& out, std::vector<std::uint64_t> const& v) {
  write_section(out, v, [](std::ostream& s, std::uint64_t x) { write_u64(s, x); });
}

inline void write_u32_section(std::ostream& out, std::vector<std::uint32_t> const& v) {
  write_section(out, v, [](std::ostream& s, std::uint32_t x) { write_u32(s, x); });
}

}  // namespace selbv::io
