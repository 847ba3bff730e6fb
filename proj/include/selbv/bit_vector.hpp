#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "selbv/word_select.hpp"

namespace selbv {

/// Plain bit vector packed into 64-bit words. Position i lives in word i / 64,
/// bit i % 64. Bits past size() in the last word are always zero.
///
/// Indexes built over a BitVector assume it is no longer mutated.
class BitVector {
 public:
  BitVector() = default;
  /// All-zero vector of n bits.
  explicit BitVector(std::uint64_t n);

  /// Takes ownership of words; words.size() must equal ceil(n / 64). Padding
  /// bits are cleared.
  static BitVector from_words(std::vector<Word> words, std::uint64_t n);
  /// "100101" puts B[0] = 1 at position 0. Only '0' and '1' are accepted.
  static BitVector from_string(std::string_view bits);
  /// Each bit is 1 when a SplitMix64 draw is below floor(density * 2^64).
  /// One draw per bit, in position order.
  static BitVector from_random(std::uint64_t n, double density, std::uint64_t seed);

  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::uint64_t num_words() const noexcept { return words_.size(); }
  std::span<Word const> words() const noexcept { return words_; }
  Word word(std::uint64_t i) const noexcept { return words_[i]; }
  std::uint64_t count_ones() const noexcept { return ones_; }

  /// Throws std::out_of_range when i >= size().
  bool get(std::uint64_t i) const;
  void set(std::uint64_t i, bool value);

  /// Number of ones in B[0..j], by scanning words. j < size().
  std::uint64_t rank_naive(std::uint64_t j) const;
  /// Smallest j with rank_naive(j) == r, r in [1, count_ones()]. Throws
  /// NotFoundError otherwise.
  std::uint64_t select_naive(std::uint64_t r) const;

  /// Bytes used by the payload words.
  std::uint64_t size_in_bytes() const noexcept { return words_.size() * sizeof(Word); }

  // File layout (little-endian):
  //   0..7    "SELBV001"
  //   8..15   n, bit count
  //   16..23  reserved, zero
  //   24..    ceil(n / 64) words
  void save(std::ostream& out) const;
  static BitVector load(std::istream& in);
  void save_file(std::filesystem::path const& path) const;
  static BitVector load_file(std::filesystem::path const& path);

  friend bool operator==(BitVector const&, BitVector const&) = default;

 private:
  void clear_padding() noexcept;

  std::vector<Word> words_;
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
};

inline constexpr std::uint64_t words_for_bits(std::uint64_t n) { return (n + 63) / 64; }

}  // namespace selbv
