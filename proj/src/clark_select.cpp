#include "selbv/clark_select.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace selbv {

namespace {
constexpr std::string_view kMagic = "SELCL001";
}

std::uint64_t ClarkSelectIndex::long_threshold(std::uint64_t n) {
  if (n <= 1) return 0;
  // log2(n) is exact for powers of two, the only n where log2(n)^4 is an
  // integer, so the ceiling cannot be pushed up by rounding.
  long double const lg = std::log2(static_cast<long double>(n));
  return static_cast<std::uint64_t>(std::ceil(lg * lg * lg * lg));
}

ClarkSelectIndex::ClarkSelectIndex(BitVector const& bv, WordSelectBackend backend)
    : size_(bv.size()), ones_(bv.count_ones()), threshold_(long_threshold(bv.size())),
      backend_(backend) {
  // Gather every 64th one, which includes every superblock start.
  std::vector<std::uint64_t> sampled;
  sampled.reserve((ones_ + kShortStride - 1) / kShortStride);
  {
    std::uint64_t seen = 0;
    std::uint64_t next = 0;  // 0-based rank of the next one to record
    auto const words = bv.words();
    for (std::uint64_t w = 0; w < words.size(); ++w) {
      unsigned const ones = popcount64(words[w]);
      while (next < seen + ones) {
        sampled.push_back(64 * w +
                          select_word_oracle(words[w], static_cast<unsigned>(next - seen)));
        next += kShortStride;
      }
      seen += ones;
    }
  }

  std::uint64_t const num_superblocks = (ones_ + kOnesPerSuperblock - 1) / kOnesPerSuperblock;
  constexpr std::uint64_t kSamplesPerSuperblock = kOnesPerSuperblock / kShortStride;
  starts_.reserve(num_superblocks);
  for (std::uint64_t t = 0; t < num_superblocks; ++t) {
    starts_.push_back(sampled[t * kSamplesPerSuperblock]);
  }

  kinds_.reserve(num_superblocks);
  payload_offsets_.reserve(num_superblocks);
  for (std::uint64_t t = 0; t < num_superblocks; ++t) {
    std::uint64_t const first_rank = t * kOnesPerSuperblock;  // 0-based
    std::uint64_t const count = std::min(kOnesPerSuperblock, ones_ - first_rank);
    if (span(t) >= threshold_) {
      kinds_.push_back(Kind::long_superblock);
      payload_offsets_.push_back(long_positions_.size());
      // Walk forward from the start collecting every one in the superblock.
      std::uint64_t w = starts_[t] / 64;
      Word bits = bv.word(w) & (~Word{0} << (starts_[t] % 64));
      for (std::uint64_t collected = 0; collected < count;) {
        while (bits == 0) bits = bv.word(++w);
        long_positions_.push_back(64 * w + tzcnt_soft(bits));
        bits &= bits - 1;
        ++collected;
      }
    } else {
      kinds_.push_back(Kind::short_superblock);
      payload_offsets_.push_back(short_offsets_.size());
      std::uint64_t const samples = (count + kShortStride - 1) / kShortStride;
      for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t const offset = sampled[t * kSamplesPerSuperblock + s] - starts_[t];
        if (offset > std::numeric_limits<std::uint32_t>::max()) {
          throw std::logic_error("short superblock offset does not fit in 32 bits");
        }
        short_offsets_.push_back(static_cast<std::uint32_t>(offset));
      }
    }
  }
}

std::uint64_t ClarkSelectIndex::span(std::uint64_t superblock) const noexcept {
  std::uint64_t const end =
      superblock + 1 < starts_.size() ? starts_[superblock + 1] : size_;
  return end - starts_[superblock];
}

std::uint64_t ClarkSelectIndex::select(BitVector const& bv, std::uint64_t r) const {
  if (r == 0 || r > ones_) {
    throw NotFoundError("select rank " + std::to_string(r) + " out of range [1, " +
                        std::to_string(ones_) + "]");
  }
  return with_word_selector(backend_, [&](auto sel) { return select_with(bv, r, sel); });
}

std::uint64_t ClarkSelectIndex::aux_bytes() const noexcept {
  return starts_.size() * sizeof(std::uint64_t) + kinds_.size() * sizeof(Kind) +
         payload_offsets_.size() * sizeof(std::uint64_t) +
         long_positions_.size() * sizeof(std::uint64_t) +
         short_offsets_.size() * sizeof(std::uint32_t);
}

void ClarkSelectIndex::save(std::ostream& out) const {
  io::write_magic(out, kMagic);
  io::write_u64(out, size_);
  io::write_u64(out, ones_);
  io::write_u64(out, threshold_);
  io::write_u64(out, static_cast<std::uint64_t>(backend_));
  io::write_u64_section(out, starts_);
  io::write_u64(out, kinds_.size());
  for (Kind k : kinds_) out.put(static_cast<char>(k));
  io::write_u64_section(out, payload_offsets_);
  io::write_u64_section(out, long_positions_);
  io::write_u32_section(out, short_offsets_);
  if (!out) throw std::runtime_error("failed writing clark select index");
}

ClarkSelectIndex ClarkSelectIndex::load(std::istream& in) {
  io::expect_magic(in, kMagic);
  ClarkSelectIndex idx;
  idx.size_ = io::read_u64(in, "size");
  idx.ones_ = io::read_u64(in, "ones");
  idx.threshold_ = io::read_u64(in, "threshold");
  std::uint64_t const backend = io::read_u64(in, "backend");
  if (backend > static_cast<std::uint64_t>(WordSelectBackend::automatic) ||
      idx.threshold_ != long_threshold(idx.size_)) {
    throw ParseError(ParseError::Kind::bad_header, "invalid clark select index header");
  }
  idx.backend_ = static_cast<WordSelectBackend>(backend);
  idx.starts_ = io::read_u64_section(in, "superblock starts");
  std::uint64_t const num_kinds = io::read_u64(in, "kinds");
  idx.kinds_ = io::read_values<Kind>(in, num_kinds, [](std::istream& s) {
    int const c = s.get();
    if (c == std::char_traits<char>::eof()) {
      throw ParseError(ParseError::Kind::truncated, "truncated input reading kinds");
    }
    if (c > 1) throw ParseError(ParseError::Kind::bad_payload, "invalid superblock kind");
    return static_cast<Kind>(c);
  });
  idx.payload_offsets_ = io::read_u64_section(in, "payload offsets");
  idx.long_positions_ = io::read_u64_section(in, "long positions");
  idx.short_offsets_ = io::read_u32_section(in, "short offsets");

  std::uint64_t const expected = (idx.ones_ + kOnesPerSuperblock - 1) / kOnesPerSuperblock;
  if (idx.starts_.size() != expected || idx.kinds_.size() != expected ||
      idx.payload_offsets_.size() != expected) {
    throw ParseError(ParseError::Kind::bad_payload, "clark select tables are inconsistent");
  }
  return idx;
}

}  // namespace selbv
