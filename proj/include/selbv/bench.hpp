#pragma once

// Microbenchmarks for word select and bit-vector select.
//
// Every timed pass is preceded by one untimed warm-up pass. Query inputs are
// generated before timing starts. Each pass folds the returned positions into
// a checksum, and all passes of a run must agree; runs that differ only in
// backend or structure must agree too.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selbv/bit_vector.hpp"
#include "selbv/clark_select.hpp"
#include "selbv/poppy.hpp"
#include "selbv/word_select.hpp"

namespace selbv::bench {

enum class Benchmark { word_register, word_random, vector_select };
enum class Structure { none, poppy, clark };

std::string_view to_string(Benchmark b);
std::string_view to_string(Structure s);
Benchmark parse_benchmark(std::string_view name);  // accepts '-' or '_'
Structure parse_structure(std::string_view name);

struct BenchConfig {
  Benchmark benchmark = Benchmark::word_register;
  Structure structure = Structure::none;
  WordSelectBackend backend = WordSelectBackend::automatic;
  unsigned log2_n = 20;
  double density = 0.5;
  std::uint64_t ops = 1'000'000;
  std::uint64_t iterations = 10;
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument unless ops >= 1, iterations >= 1 and
  /// log2_n is in [10, 40].
  void validate() const;

  friend bool operator==(BenchConfig const&, BenchConfig const&) = default;
};

struct BenchRecord {
  BenchConfig config;
  double ns_per_op_mean = 0;
  std::vector<double> ns_per_op;  // one entry per timed iteration
  std::uint64_t checksum = 0;
};

/// `ops` ranks, uniform in [1, count_ones()], from SplitMix64(seed).
/// Throws std::invalid_argument for a vector without ones.
std::vector<std::uint64_t> gen_queries(BitVector const& bv, std::uint64_t ops,
                                       std::uint64_t seed);

/// Select on one fixed random word with random valid j.
BenchRecord bench_word_register(BenchConfig const& config);
/// Select on a random nonzero word of bv with random valid j.
BenchRecord bench_word_random(BenchConfig const& config, BitVector const& bv);
/// Full select(r) through a prebuilt index. config.backend picks the word
/// select used inside the index, regardless of the backend it was built with.
BenchRecord bench_vector_select(BenchConfig const& config, BitVector const& bv,
                                PoppyIndex const& index);
BenchRecord bench_vector_select(BenchConfig const& config, BitVector const& bv,
                                ClarkSelectIndex const& index);
/// Builds the index named by config.structure, then times it.
BenchRecord bench_vector_select(BenchConfig const& config, BitVector const& bv);

/// Position checksum fold: c' = rotl(c, 1) ^ pos, starting at 0.
constexpr std::uint64_t fold_checksum(std::uint64_t c, std::uint64_t pos) {
  return ((c << 1) | (c >> 63)) ^ pos;
}

/// True when records that share benchmark, log2_n, density, ops and seed all
/// carry the same checksum. Structure and backend may differ.
bool checksums_consistent(std::span<BenchRecord const> records);

inline constexpr std::string_view kCsvHeader =
    "benchmark,structure,backend,log2_n,density,ops,iterations,seed,ns_per_op_mean,"
    "ns_per_op_all,checksum";

/// Header plus one row per record. ns values have two decimals; the
/// per-iteration list is ';'-separated.
void write_csv(std::span<BenchRecord const> records, std::ostream& out);
/// Inverse of write_csv. Throws std::invalid_argument on malformed input.
std::vector<BenchRecord> read_csv(std::istream& in);

}  // namespace selbv::bench
