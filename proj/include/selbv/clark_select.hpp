#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "selbv/bit_vector.hpp"
#include "selbv/errors.hpp"
#include "selbv/word_select.hpp"

namespace selbv {

/// Select-only index in the style of Clark's structure as implemented by SDSL.
///
/// The ones are cut into superblocks of 4096: superblock t holds the ones with
/// 1-based ranks 4096t+1 .. 4096(t+1). Its span runs from its first one to the
/// first one of superblock t+1 (or to n for the last). A superblock whose span
/// is at least ceil(log2(n)^4) bits is long and stores every one position
/// absolutely. Otherwise it is short and stores the position of every 64th one
/// relative to the superblock start; queries then popcount forward from there
/// and finish with a word select.
class ClarkSelectIndex {
 public:
  static constexpr std::uint64_t kOnesPerSuperblock = 4096;
  static constexpr std::uint64_t kShortStride = 64;

  enum class Kind : std::uint8_t { short_superblock = 0, long_superblock = 1 };

  ClarkSelectIndex() = default;
  explicit ClarkSelectIndex(BitVector const& bv,
                            WordSelectBackend backend = WordSelectBackend::automatic);

  /// ceil(log2(n)^4); 0 for n <= 1.
  static std::uint64_t long_threshold(std::uint64_t n);

  /// Position of the r-th one, r in [1, count_ones()]. Throws NotFoundError.
  std::uint64_t select(BitVector const& bv, std::uint64_t r) const;

  /// select() with the word-select step fixed at compile time. No range check.
  /// Long superblocks never call word_select.
  template <class WordSel>
  std::uint64_t select_with(BitVector const& bv, std::uint64_t r, WordSel word_select) const;

  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t count_ones() const noexcept { return ones_; }
  std::uint64_t threshold() const noexcept { return threshold_; }
  WordSelectBackend backend() const noexcept { return backend_; }
  std::uint64_t num_superblocks() const noexcept { return starts_.size(); }

  std::vector<std::uint64_t> const& superblock_starts() const noexcept { return starts_; }
  Kind kind(std::uint64_t superblock) const noexcept { return kinds_[superblock]; }
  /// Span in bits as used for classification.
  std::uint64_t span(std::uint64_t superblock) const noexcept;
  std::vector<std::uint64_t> const& long_positions() const noexcept { return long_positions_; }
  std::vector<std::uint32_t> const& short_offsets() const noexcept { return short_offsets_; }

  /// Sum of the table sizes in bytes.
  std::uint64_t aux_bytes() const noexcept;

  // Serialized as "SELCL001", then n, ones, threshold and backend as u64,
  // then sections (u64 length + little-endian values) for the superblock
  // starts, kinds (one u8 each), payload offsets, long positions (u64) and
  // short offsets (u32).
  void save(std::ostream& out) const;
  static ClarkSelectIndex load(std::istream& in);

  friend bool operator==(ClarkSelectIndex const&, ClarkSelectIndex const&) = default;

 private:
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  std::uint64_t threshold_ = 0;
  WordSelectBackend backend_ = WordSelectBackend::automatic;
  std::vector<std::uint64_t> starts_;
  std::vector<Kind> kinds_;
  // Index of the superblock's first entry in long_positions_ or short_offsets_.
  std::vector<std::uint64_t> payload_offsets_;
  std::vector<std::uint64_t> long_positions_;
  std::vector<std::uint32_t> short_offsets_;
};

template <class WordSel>
std::uint64_t ClarkSelectIndex::select_with(BitVector const& bv, std::uint64_t r,
                                            WordSel word_select) const {
  std::uint64_t const superblock = (r - 1) / kOnesPerSuperblock;
  std::uint64_t const local = (r - 1) % kOnesPerSuperblock;  // 0-based within the superblock
  std::uint64_t const payload = payload_offsets_[superblock];
  if (kinds_[superblock] == Kind::long_superblock) return long_positions_[payload + local];

  std::uint64_t const pos =
      starts_[superblock] + short_offsets_[payload + local / kShortStride];
  // pos is the sampled one itself; skip past `remaining` more ones.
  std::uint64_t remaining = local % kShortStride;
  auto const words = bv.words();
  std::uint64_t w = pos / 64;
  Word bits = words[w] & (~Word{0} << (pos % 64));
  for (;;) {
    unsigned const ones = popcount64(bits);
    if (remaining < ones) break;
    remaining -= ones;
    bits = words[++w];
  }
  return 64 * w + word_select(bits, static_cast<unsigned>(remaining));
}

}  // namespace selbv
