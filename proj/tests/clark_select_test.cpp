#include "selbv/clark_select.hpp"

#include <gtest/gtest.h>

#include <array>
#include <sstream>

#include "selbv/poppy.hpp"
#include "selbv/random.hpp"
#include "test_oracle.hpp"

using namespace selbv;
using test_support::ScanOracle;

namespace {

constexpr std::array kBackends = {WordSelectBackend::ptselect, WordSelectBackend::broadword,
                                  WordSelectBackend::bytescan, WordSelectBackend::oracle};

struct CountingSelect {
  std::uint64_t* calls;
  unsigned operator()(Word x, unsigned j) const {
    ++*calls;
    return select_word_oracle(x, j);
  }
};

BitVector spaced_ones(std::uint64_t n, std::uint64_t count, std::uint64_t first,
                      std::uint64_t stride) {
  BitVector bv(n);
  for (std::uint64_t i = 0; i < count; ++i) bv.set(first + i * stride, true);
  return bv;
}

}  // namespace

TEST(ClarkSelect, threshold_values) {
  EXPECT_EQ(ClarkSelectIndex::long_threshold(0), 0u);
  EXPECT_EQ(ClarkSelectIndex::long_threshold(1), 0u);
  EXPECT_EQ(ClarkSelectIndex::long_threshold(2), 1u);
  EXPECT_EQ(ClarkSelectIndex::long_threshold(3), 7u);  // log2(3)^4 = 6.31
  EXPECT_EQ(ClarkSelectIndex::long_threshold(1 << 16), 65536u);
  EXPECT_EQ(ClarkSelectIndex::long_threshold(1 << 20), 160000u);
  EXPECT_EQ(ClarkSelectIndex::long_threshold(std::uint64_t{1} << 32), 1048576u);
  EXPECT_EQ(ClarkSelectIndex::long_threshold(1000), 9864u);  // log2(1000)^4 = 9863.84
}

TEST(ClarkSelect, worked_example) {
  auto const bv = test_support::worked_example();
  for (auto b : kBackends) {
    ClarkSelectIndex const idx(bv, b);
    EXPECT_EQ(idx.select(bv, 4), 8u);
    EXPECT_EQ(idx.select(bv, 1), 0u);
    EXPECT_EQ(idx.select(bv, 5), 10u);
  }
}

TEST(ClarkSelect, empty_vector) {
  BitVector const bv;
  ClarkSelectIndex const idx(bv);
  EXPECT_EQ(idx.num_superblocks(), 0u);
  EXPECT_THROW(idx.select(bv, 1), NotFoundError);
  BitVector const zeros(5000);
  EXPECT_EQ(ClarkSelectIndex(zeros).num_superblocks(), 0u);
}

TEST(ClarkSelect, all_ones_is_all_short) {
  auto const bv = BitVector::from_random(1 << 20, 1.0, 0);
  ClarkSelectIndex const idx(bv);
  ASSERT_EQ(idx.num_superblocks(), 256u);
  for (std::uint64_t t = 0; t < idx.num_superblocks(); ++t) {
    EXPECT_EQ(idx.span(t), 4096u);
    EXPECT_EQ(idx.kind(t), ClarkSelectIndex::Kind::short_superblock);
  }
  EXPECT_TRUE(idx.long_positions().empty());
  EXPECT_EQ(idx.short_offsets().size(), 256u * 64);
  for (std::uint64_t r = 1; r <= bv.count_ones(); r += 777) EXPECT_EQ(idx.select(bv, r), r - 1);
}

TEST(ClarkSelect, sparse_superblock_is_long_and_skips_word_select) {
  auto const bv = spaced_ones(1 << 20, 4096, 0, 256);
  ClarkSelectIndex const idx(bv);
  ASSERT_EQ(idx.num_superblocks(), 1u);
  EXPECT_EQ(idx.span(0), 1u << 20);
  EXPECT_EQ(idx.kind(0), ClarkSelectIndex::Kind::long_superblock);
  EXPECT_EQ(idx.long_positions().size(), 4096u);

  std::uint64_t calls = 0;
  for (std::uint64_t r = 1; r <= 4096; ++r) {
    ASSERT_EQ(idx.select_with(bv, r, CountingSelect{&calls}), (r - 1) * 256);
    ASSERT_EQ(idx.select(bv, r), bv.select_naive(r));
  }
  EXPECT_EQ(calls, 0u);
}

TEST(ClarkSelect, short_path_uses_word_select) {
  auto const bv = BitVector::from_random(1 << 16, 0.5, 3);
  ClarkSelectIndex const idx(bv);
  std::uint64_t calls = 0;
  for (std::uint64_t r = 1; r <= 1000; ++r) idx.select_with(bv, r, CountingSelect{&calls});
  EXPECT_EQ(calls, 1000u);
}

TEST(ClarkSelect, threshold_boundary) {
  // n = 2^16 has threshold 65536; one superblock spans n - first.
  auto const at = spaced_ones(1 << 16, 4096, 0, 16);
  EXPECT_EQ(ClarkSelectIndex(at).kind(0), ClarkSelectIndex::Kind::long_superblock);
  auto const below = spaced_ones(1 << 16, 4096, 1, 15);
  EXPECT_EQ(ClarkSelectIndex(below).span(0), 65535u);
  EXPECT_EQ(ClarkSelectIndex(below).kind(0), ClarkSelectIndex::Kind::short_superblock);
  for (auto const* bv : {&at, &below}) {
    ClarkSelectIndex const idx(*bv);
    for (std::uint64_t r = 1; r <= 4096; ++r) ASSERT_EQ(idx.select(*bv, r), bv->select_naive(r));
  }
}

TEST(ClarkSelect, mixed_superblocks) {
  // Dense region then a sparse tail: both kinds appear.
  std::uint64_t const n = 1 << 22;
  BitVector bv(n);
  for (std::uint64_t i = 0; i < 20000; ++i) bv.set(i, true);
  SplitMix64 rng(9);
  for (int i = 0; i < 9000; ++i) bv.set(20000 + rng.below(n - 20000), true);
  ClarkSelectIndex const idx(bv);
  bool saw_long = false, saw_short = false;
  for (std::uint64_t t = 0; t < idx.num_superblocks(); ++t) {
    bool const is_long = idx.span(t) >= idx.threshold();
    EXPECT_EQ(is_long, idx.kind(t) == ClarkSelectIndex::Kind::long_superblock);
    saw_long |= is_long;
    saw_short |= !is_long;
  }
  EXPECT_TRUE(saw_long);
  EXPECT_TRUE(saw_short);
  for (std::uint64_t p : idx.long_positions()) ASSERT_TRUE(bv.get(p));

  ScanOracle const oracle(bv);
  PoppyIndex const poppy(bv);
  for (std::uint64_t r = 1; r <= oracle.count(); ++r) {
    ASSERT_EQ(idx.select(bv, r), oracle.select(r)) << r;
    ASSERT_EQ(poppy.select(bv, r), oracle.select(r)) << r;
  }
}

TEST(ClarkSelect, random_vectors_all_backends) {
  for (double d : {0.1, 0.5, 0.9}) {
    auto const bv = BitVector::from_random(1 << 18, d, 77);
    ScanOracle const oracle(bv);
    for (auto b : kBackends) {
      ClarkSelectIndex const idx(bv, b);
      for (std::uint64_t r = 1; r <= oracle.count(); r += (b == WordSelectBackend::oracle ? 7 : 1)) {
        ASSERT_EQ(idx.select(bv, r), oracle.select(r)) << to_string(b) << " r=" << r;
      }
    }
  }
}

TEST(ClarkSelect, partial_final_superblock) {
  for (std::uint64_t n : {65, 4095, 4096, 4097, 9000, 70000}) {
    auto const bv = BitVector::from_random(n, 0.999, n);
    ClarkSelectIndex const idx(bv);
    ScanOracle const oracle(bv);
    for (std::uint64_t r = 1; r <= oracle.count(); ++r) ASSERT_EQ(idx.select(bv, r), oracle.select(r));
  }
}

TEST(ClarkSelect, serialization_round_trip) {
  std::uint64_t const n = 1 << 22;
  BitVector bv(n);
  for (std::uint64_t i = 0; i < 10000; ++i) bv.set(i * 3, true);
  for (std::uint64_t i = 0; i < 5000; ++i) bv.set(40000 + i * 700, true);
  ClarkSelectIndex const idx(bv, WordSelectBackend::broadword);
  std::stringstream s;
  idx.save(s);
  EXPECT_EQ(s.str().substr(0, 8), "SELCL001");
  auto const loaded = ClarkSelectIndex::load(s);
  EXPECT_EQ(loaded, idx);
  for (std::uint64_t r = 1; r <= bv.count_ones(); ++r) ASSERT_EQ(loaded.select(bv, r), idx.select(bv, r));

  std::string bytes = s.str();
  bytes[0] = 'x';
  std::stringstream bad(bytes);
  EXPECT_THROW(ClarkSelectIndex::load(bad), ParseError);
  std::stringstream cut(s.str().substr(0, 100));
  EXPECT_THROW(ClarkSelectIndex::load(cut), ParseError);
}

TEST(ClarkSelect, out_of_range) {
  auto const bv = BitVector::from_random(1000, 0.5, 1);
  ClarkSelectIndex const idx(bv);
  EXPECT_THROW(idx.select(bv, 0), NotFoundError);
  EXPECT_THROW(idx.select(bv, bv.count_ones() + 1), NotFoundError);
}
