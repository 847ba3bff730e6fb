#include "selbv/bench.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace selbv;
using namespace selbv::bench;

namespace {

BenchConfig small_config(Benchmark b, Structure s, WordSelectBackend backend) {
  BenchConfig c;
  c.benchmark = b;
  c.structure = s;
  c.backend = backend;
  c.log2_n = 16;
  c.density = 0.3;
  c.ops = 20000;
  c.iterations = 2;
  c.seed = 7;
  return c;
}

}  // namespace

TEST(Bench, gen_queries_is_deterministic_and_in_range) {
  auto const bv = BitVector::from_random(1 << 16, 0.5, 1);
  auto const a = gen_queries(bv, 10000, 3);
  EXPECT_EQ(a, gen_queries(bv, 10000, 3));
  EXPECT_NE(a, gen_queries(bv, 10000, 4));
  ASSERT_EQ(a.size(), 10000u);
  for (auto r : a) {
    ASSERT_GE(r, 1u);
    ASSERT_LE(r, bv.count_ones());
  }
  EXPECT_THROW(gen_queries(BitVector(100), 10, 1), std::invalid_argument);
}

TEST(Bench, gen_queries_is_uniform_by_decile) {
  auto const bv = BitVector::from_random(1 << 20, 0.5, 2);
  std::uint64_t const ops = 1'000'000;
  auto const q = gen_queries(bv, ops, 5);
  std::array<std::uint64_t, 10> bins{};
  for (auto r : q) ++bins[std::min<std::uint64_t>(9, (r - 1) * 10 / bv.count_ones())];
  for (auto c : bins) {
    EXPECT_NEAR(static_cast<double>(c), ops / 10.0, ops / 10.0 * 0.05);
  }
}

TEST(Bench, checksum_fold) {
  static_assert(fold_checksum(0, 5) == 5);
  static_assert(fold_checksum(1ULL << 63, 0) == 1);
  EXPECT_EQ(fold_checksum(fold_checksum(0, 1), 2), 0u);
}

TEST(Bench, vector_select_checksums_agree_across_backends_and_structures) {
  auto const bv = BitVector::from_random(1 << 16, 0.3, 7);
  std::vector<BenchRecord> records;
  for (auto s : {Structure::poppy, Structure::clark}) {
    for (auto b : {WordSelectBackend::ptselect, WordSelectBackend::broadword,
                   WordSelectBackend::bytescan, WordSelectBackend::oracle}) {
      records.push_back(bench_vector_select(small_config(Benchmark::vector_select, s, b), bv));
    }
  }
  EXPECT_TRUE(checksums_consistent(records));
  // The checksum equals the fold of the true answers.
  auto const q = gen_queries(bv, 20000, 7);
  std::uint64_t want = 0;
  for (auto r : q) want = fold_checksum(want, bv.select_naive(r));
  EXPECT_EQ(records.front().checksum, want);
  for (auto const& rec : records) {
    EXPECT_EQ(rec.ns_per_op.size(), 2u);
    EXPECT_GT(rec.ns_per_op_mean, 0.0);
  }

  records.back().checksum ^= 1;
  EXPECT_FALSE(checksums_consistent(records));
}

TEST(Bench, word_benchmarks_agree_across_backends) {
  auto const bv = BitVector::from_random(1 << 16, 0.2, 3);
  std::vector<BenchRecord> reg, rnd;
  for (auto b : {WordSelectBackend::ptselect, WordSelectBackend::broadword,
                 WordSelectBackend::bytescan, WordSelectBackend::oracle}) {
    reg.push_back(bench_word_register(small_config(Benchmark::word_register, Structure::none, b)));
    rnd.push_back(bench_word_random(small_config(Benchmark::word_random, Structure::none, b), bv));
  }
  EXPECT_TRUE(checksums_consistent(reg));
  EXPECT_TRUE(checksums_consistent(rnd));
  EXPECT_THROW(bench_word_random(small_config(Benchmark::word_random, Structure::none,
                                              WordSelectBackend::ptselect),
                                 BitVector(1 << 16)),
               std::invalid_argument);
}

TEST(Bench, validate) {
  BenchConfig c;
  EXPECT_NO_THROW(c.validate());
  c.ops = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = BenchConfig{};
  c.iterations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = BenchConfig{};
  c.log2_n = 9;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.log2_n = 41;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Bench, names_round_trip) {
  for (auto b : {Benchmark::word_register, Benchmark::word_random, Benchmark::vector_select}) {
    EXPECT_EQ(parse_benchmark(to_string(b)), b);
  }
  EXPECT_EQ(parse_benchmark("vector-select"), Benchmark::vector_select);
  EXPECT_EQ(parse_benchmark("word_register"), Benchmark::word_register);
  for (auto s : {Structure::none, Structure::poppy, Structure::clark}) {
    EXPECT_EQ(parse_structure(to_string(s)), s);
  }
  EXPECT_THROW(parse_benchmark("rank"), std::invalid_argument);
  EXPECT_THROW(parse_structure("rrr"), std::invalid_argument);
}

TEST(BenchCsv, empty_is_header_only) {
  std::ostringstream out;
  write_csv({}, out);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(BenchCsv, round_trip) {
  auto const bv = BitVector::from_random(1 << 16, 0.3, 7);
  std::vector<BenchRecord> records;
  records.push_back(bench_vector_select(
      small_config(Benchmark::vector_select, Structure::clark, WordSelectBackend::bytescan), bv));
  records.push_back(bench_word_register(
      small_config(Benchmark::word_register, Structure::none, WordSelectBackend::broadword)));

  std::stringstream s;
  write_csv(records, s);
  EXPECT_TRUE(s.str().starts_with(std::string(kCsvHeader) + "\n"));

  auto const back = read_csv(s);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].config, records[i].config);
    EXPECT_EQ(back[i].checksum, records[i].checksum);
    ASSERT_EQ(back[i].ns_per_op.size(), records[i].ns_per_op.size());
    for (std::size_t k = 0; k < back[i].ns_per_op.size(); ++k) {
      EXPECT_NEAR(back[i].ns_per_op[k], records[i].ns_per_op[k], 0.005);
    }
    double const avg = std::accumulate(back[i].ns_per_op.begin(), back[i].ns_per_op.end(), 0.0) /
                       back[i].ns_per_op.size();
    EXPECT_NEAR(back[i].ns_per_op_mean, avg, 0.01);
  }
}

TEST(BenchCsv, rejects_malformed_input) {
  std::istringstream bad_header("benchmark,structure\n");
  EXPECT_THROW(read_csv(bad_header), std::invalid_argument);
  std::istringstream short_row(std::string(kCsvHeader) + "\nvector_select,poppy\n");
  EXPECT_THROW(read_csv(short_row), std::invalid_argument);
  std::istringstream bad_number(std::string(kCsvHeader) +
                                "\nvector_select,poppy,ptselect,x,0.5,1,1,1,1.00,1.00,1\n");
  EXPECT_THROW(read_csv(bad_number), std::invalid_argument);
}
