#include "selbv/poppy.hpp"

#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace selbv {

namespace {
constexpr std::string_view kMagic = "SELPY001";
}

PoppyIndex::PoppyIndex(BitVector const& bv, std::uint64_t sampling, WordSelectBackend backend)
    : size_(bv.size()), ones_(bv.count_ones()), sampling_(sampling), backend_(backend) {
  if (sampling == 0 || sampling % 64 != 0) {
    throw std::invalid_argument("sampling interval must be a positive multiple of 64, got " +
                                std::to_string(sampling));
  }
  auto const words = bv.words();
  std::uint64_t const num_lower = (words.size() + kWordsPerLowerBlock - 1) / kWordsPerLowerBlock;
  std::uint64_t const num_upper = (num_lower + kLowerBlocksPerUpper - 1) / kLowerBlocksPerUpper;

  l0_.reserve(num_upper);
  l1l2_.reserve(num_lower);
  sample_offsets_.reserve(num_upper + 1);

  std::uint64_t total = 0;
  for (std::uint64_t upper = 0; upper < num_upper; ++upper) {
    l0_.push_back(total);
    sample_offsets_.push_back(samples_.size());
    samples_.push_back(0);

    std::uint64_t local = 0;  // ones seen in this upper block
    std::uint64_t next_sample = sampling;
    std::uint64_t const lower_end = std::min(num_lower, (upper + 1) * kLowerBlocksPerUpper);
    for (std::uint64_t lower = upper * kLowerBlocksPerUpper; lower < lower_end; ++lower) {
      std::uint64_t entry = local;
      for (std::uint64_t basic = 0; basic < 4; ++basic) {
        unsigned count = 0;
        for (std::uint64_t i = 0; i < kWordsPerBasicBlock; ++i) {
          std::uint64_t const w = lower * kWordsPerLowerBlock + basic * kWordsPerBasicBlock + i;
          if (w >= words.size()) break;
          unsigned const ones = popcount64(words[w]);
          while (local + ones >= next_sample) {
            unsigned const j = static_cast<unsigned>(next_sample - local - 1);
            std::uint64_t const pos = 64 * w + select_word_oracle(words[w], j);
            samples_.push_back(static_cast<std::uint32_t>(pos - upper * kUpperBlockBits));
            next_sample += sampling;
          }
          count += ones;
          local += ones;
        }
        if (basic < 3) entry |= std::uint64_t{count} << (32 + 10 * basic);
      }
      l1l2_.push_back(entry);
    }
    total += local;
  }
  sample_offsets_.push_back(samples_.size());
}

std::uint64_t PoppyIndex::rank(BitVector const& bv, std::uint64_t j) const {
  if (j >= size_) {
    throw std::out_of_range("rank position " + std::to_string(j) + " out of range for size " +
                            std::to_string(size_));
  }
  std::uint64_t const lower = j / kLowerBlockBits;
  std::uint64_t const entry = l1l2_[lower];
  std::uint64_t rank = l0_[j / kUpperBlockBits] + l1_of(entry);
  unsigned const basic = static_cast<unsigned>((j / kBasicBlockBits) % 4);
  for (unsigned b = 0; b < basic; ++b) rank += l2_of(entry, b);

  auto const words = bv.words();
  std::uint64_t const last = j / 64;
  for (std::uint64_t w = j / kBasicBlockBits * kWordsPerBasicBlock; w < last; ++w) {
    rank += popcount64(words[w]);
  }
  return rank + popcount64(words[last] << (63 - j % 64));
}

std::uint64_t PoppyIndex::select(BitVector const& bv, std::uint64_t r) const {
  if (r == 0 || r > ones_) {
    throw NotFoundError("select rank " + std::to_string(r) + " out of range [1, " +
                        std::to_string(ones_) + "]");
  }
  return with_word_selector(backend_, [&](auto sel) { return select_with(bv, r, sel); });
}

std::uint64_t PoppyIndex::aux_bytes() const noexcept {
  return l0_.size() * sizeof(std::uint64_t) + l1l2_.size() * sizeof(std::uint64_t) +
         samples_.size() * sizeof(std::uint32_t) +
         sample_offsets_.size() * sizeof(std::uint64_t);
}

void PoppyIndex::save(std::ostream& out) const {
  io::write_magic(out, kMagic);
  io::write_u64(out, size_);
  io::write_u64(out, ones_);
  io::write_u64(out, sampling_);
  io::write_u64(out, static_cast<std::uint64_t>(backend_));
  io::write_u64_section(out, l0_);
  io::write_u64_section(out, l1l2_);
  io::write_u32_section(out, samples_);
  io::write_u64_section(out, sample_offsets_);
  if (!out) throw std::runtime_error("failed writing poppy index");
}

PoppyIndex PoppyIndex::load(std::istream& in) {
  io::expect_magic(in, kMagic);
  PoppyIndex idx;
  idx.size_ = io::read_u64(in, "size");
  idx.ones_ = io::read_u64(in, "ones");
  idx.sampling_ = io::read_u64(in, "sampling");
  std::uint64_t const backend = io::read_u64(in, "backend");
  if (idx.sampling_ == 0 || idx.sampling_ % 64 != 0 ||
      backend > static_cast<std::uint64_t>(WordSelectBackend::automatic)) {
    throw ParseError(ParseError::Kind::bad_header, "invalid poppy index header");
  }
  idx.backend_ = static_cast<WordSelectBackend>(backend);
  idx.l0_ = io::read_u64_section(in, "L0");
  idx.l1l2_ = io::read_u64_section(in, "L1L2");
  idx.samples_ = io::read_u32_section(in, "S");
  idx.sample_offsets_ = io::read_u64_section(in, "S offsets");

  std::uint64_t const num_lower = (words_for_bits(idx.size_) + kWordsPerLowerBlock - 1) /
                                  kWordsPerLowerBlock;
  if (idx.l1l2_.size() != num_lower || idx.sample_offsets_.size() != idx.l0_.size() + 1 ||
      idx.sample_offsets_.back() != idx.samples_.size()) {
    throw ParseError(ParseError::Kind::bad_payload, "poppy index tables are inconsistent");
  }
  return idx;
}

}  // namespace selbv
