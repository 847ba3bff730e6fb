#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "selbv/bit_vector.hpp"
#include "selbv/errors.hpp"
#include "selbv/word_select.hpp"

namespace selbv {

/// Rank and select over a BitVector with combined sampling in the style of
/// CS-Poppy.
///
/// Layout:
///  - basic block: 512 bits (8 words, one cache line)
///  - lower block: 4 basic blocks (2048 bits)
///  - upper block: 2^21 lower blocks (2^32 bits)
///
/// Tables:
///  - L0: ones before each upper block (absolute, 64-bit).
///  - L1L2: one 64-bit entry per lower block. Bits 0..31 hold the ones before
///    the lower block relative to its upper block. Bits 32..41, 42..51 and
///    52..61 hold the popcounts of basic blocks 0, 1 and 2; the fourth count
///    is implied by the next entry. Eight lower blocks share a cache line.
///  - S: per upper block, sample i is the position (relative to the upper
///    block) of its (k*i)-th one, with sample 0 defined as 0.
///
/// The index does not own the vector. Queries take the vector it was built
/// from, which must not change afterwards.
class PoppyIndex {
 public:
  static constexpr std::uint64_t kBasicBlockBits = 512;
  static constexpr std::uint64_t kLowerBlockBits = 2048;
  static constexpr std::uint64_t kLowerBlocksPerUpper = std::uint64_t{1} << 21;
  static constexpr std::uint64_t kUpperBlockBits = kLowerBlockBits * kLowerBlocksPerUpper;
  static constexpr std::uint64_t kWordsPerBasicBlock = kBasicBlockBits / 64;
  static constexpr std::uint64_t kWordsPerLowerBlock = kLowerBlockBits / 64;
  static constexpr std::uint64_t kDefaultSampling = 8192;

  PoppyIndex() = default;
  /// sampling must be a positive multiple of 64 (std::invalid_argument).
  explicit PoppyIndex(BitVector const& bv, std::uint64_t sampling = kDefaultSampling,
                      WordSelectBackend backend = WordSelectBackend::automatic);

  /// Ones in B[0..j]; j < size().
  std::uint64_t rank(BitVector const& bv, std::uint64_t j) const;
  /// Position of the r-th one, r in [1, count_ones()]. Throws NotFoundError.
  std::uint64_t select(BitVector const& bv, std::uint64_t r) const;

  /// select() with the word-select step fixed at compile time. No range check.
  template <class WordSel>
  std::uint64_t select_with(BitVector const& bv, std::uint64_t r, WordSel word_select) const;

  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t count_ones() const noexcept { return ones_; }
  std::uint64_t sampling() const noexcept { return sampling_; }
  WordSelectBackend backend() const noexcept { return backend_; }

  /// Sum of the table sizes in bytes.
  std::uint64_t aux_bytes() const noexcept;

  // Table access, used by tests and the verifier.
  std::vector<std::uint64_t> const& l0() const noexcept { return l0_; }
  std::vector<std::uint64_t> const& l1l2() const noexcept { return l1l2_; }
  std::vector<std::uint32_t> const& samples() const noexcept { return samples_; }
  std::vector<std::uint64_t> const& sample_offsets() const noexcept { return sample_offsets_; }

  static std::uint32_t l1_of(std::uint64_t entry) noexcept {
    return static_cast<std::uint32_t>(entry);
  }
  static unsigned l2_of(std::uint64_t entry, unsigned basic_block) noexcept {
    return static_cast<unsigned>(entry >> (32 + 10 * basic_block)) & 0x3FF;
  }

  // Serialized as "SELPY001", then n, ones, sampling and backend as u64, then
  // the L0, L1L2, S and S-offset tables, each as a u64 length followed by
  // little-endian values (S values are u32).
  void save(std::ostream& out) const;
  static PoppyIndex load(std::istream& in);

  friend bool operator==(PoppyIndex const&, PoppyIndex const&) = default;

 private:
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  std::uint64_t sampling_ = kDefaultSampling;
  WordSelectBackend backend_ = WordSelectBackend::automatic;
  std::vector<std::uint64_t> l0_;
  std::vector<std::uint64_t> l1l2_;
  std::vector<std::uint32_t> samples_;
  // samples_ of upper block u occupy [sample_offsets_[u], sample_offsets_[u + 1]).
  std::vector<std::uint64_t> sample_offsets_;
};

template <class WordSel>
std::uint64_t PoppyIndex::select_with(BitVector const& bv, std::uint64_t r,
                                      WordSel word_select) const {
  // Upper block: last one whose L0 entry is below r.
  std::uint64_t upper = 0;
  while (upper + 1 < l0_.size() && l0_[upper + 1] < r) ++upper;
  std::uint64_t const local_rank = r - l0_[upper];  // 1-based within the upper block

  // Jump to the lower block holding sample floor(local_rank / k). That sample
  // is the (k * floor(local_rank / k))-th one, so the target is at or after it.
  std::uint32_t const sample = samples_[sample_offsets_[upper] + local_rank / sampling_];
  std::uint64_t const first_lower = upper * kLowerBlocksPerUpper;
  std::uint64_t const end_lower =
      std::min<std::uint64_t>(first_lower + kLowerBlocksPerUpper, l1l2_.size());
  std::uint64_t lower = first_lower + sample / kLowerBlockBits;
  while (lower + 1 < end_lower && l1_of(l1l2_[lower + 1]) < local_rank) ++lower;

  std::uint64_t const entry = l1l2_[lower];
  std::uint64_t remaining = local_rank - l1_of(entry);  // 1-based within the lower block
  unsigned basic = 0;
  while (basic < 3) {
    unsigned const count = l2_of(entry, basic);
    if (remaining <= count) break;
    remaining -= count;
    ++basic;
  }

  std::uint64_t w = lower * kWordsPerLowerBlock + basic * kWordsPerBasicBlock;
  auto const words = bv.words();
  for (;;) {
    unsigned const ones = popcount64(words[w]);
    if (remaining <= ones) break;
    remaining -= ones;
    ++w;
  }
  // Vector select is 1-based, word select 0-based.
  return 64 * w + word_select(words[w], static_cast<unsigned>(remaining - 1));
}

}  // namespace selbv
