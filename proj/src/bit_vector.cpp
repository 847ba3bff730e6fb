#include "selbv/bit_vector.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"
#include "selbv/errors.hpp"
#include "selbv/random.hpp"

namespace selbv {

namespace {

constexpr std::string_view kMagic = "SELBV001";

std::uint64_t count_words(std::span<Word const> words) {
  std::uint64_t ones = 0;
  for (Word w : words) ones += popcount64(w);
  return ones;
}

void check_position(std::uint64_t i, std::uint64_t n) {
  if (i >= n) {
    throw std::out_of_range("bit position " + std::to_string(i) + " out of range for size " +
                            std::to_string(n));
  }
}

}  // namespace

BitVector::BitVector(std::uint64_t n) : words_(words_for_bits(n), 0), size_(n) {}

BitVector BitVector::from_words(std::vector<Word> words, std::uint64_t n) {
  if (words.size() != words_for_bits(n)) {
    throw std::invalid_argument("word count does not match bit count");
  }
  BitVector bv;
  bv.words_ = std::move(words);
  bv.size_ = n;
  bv.clear_padding();
  bv.ones_ = count_words(bv.words_);
  return bv;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector bv(bits.size());
  for (std::uint64_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      bv.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
  }
  return bv;
}

BitVector BitVector::from_random(std::uint64_t n, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("density must be in [0, 1]");
  }
  BitVector bv(n);
  SplitMix64 rng(seed);
  bool const always = density >= 1.0;
  // density * 2^64 is exact in double; the conversion truncates toward zero.
  Word const threshold = always ? 0 : static_cast<Word>(std::ldexp(density, 64));
  for (std::uint64_t w = 0; w < bv.words_.size(); ++w) {
    std::uint64_t const bits = std::min<std::uint64_t>(64, n - 64 * w);
    Word value = 0;
    for (std::uint64_t b = 0; b < bits; ++b) {
      bool const one = always || rng.next() < threshold;
      value |= Word{one} << b;
    }
    bv.words_[w] = value;
  }
  bv.ones_ = count_words(bv.words_);
  return bv;
}

bool BitVector::get(std::uint64_t i) const {
  check_position(i, size_);
  return (words_[i / 64] >> (i % 64)) & 1;
}

void BitVector::set(std::uint64_t i, bool value) {
  check_position(i, size_);
  Word& w = words_[i / 64];
  Word const mask = Word{1} << (i % 64);
  bool const old = w & mask;
  if (old == value) return;
  w ^= mask;
  if (value) {
    ++ones_;
  } else {
    --ones_;
  }
}

std::uint64_t BitVector::rank_naive(std::uint64_t j) const {
  check_position(j, size_);
  std::uint64_t const last = j / 64;
  std::uint64_t ones = 0;
  for (std::uint64_t w = 0; w < last; ++w) ones += popcount64(words_[w]);
  // Shifting left drops every bit above j % 64.
  return ones + popcount64(words_[last] << (63 - j % 64));
}

std::uint64_t BitVector::select_naive(std::uint64_t r) const {
  if (r == 0 || r > ones_) {
    throw NotFoundError("select rank " + std::to_string(r) + " out of range [1, " +
                        std::to_string(ones_) + "]");
  }
  std::uint64_t remaining = r;
  for (std::uint64_t w = 0;; ++w) {
    unsigned const ones = popcount64(words_[w]);
    if (remaining <= ones) {
      return 64 * w + select_word_oracle(words_[w], static_cast<unsigned>(remaining - 1));
    }
    remaining -= ones;
  }
}

void BitVector::clear_padding() noexcept {
  if (size_ % 64 != 0) words_.back() &= (Word{1} << (size_ % 64)) - 1;
}

void BitVector::save(std::ostream& out) const {
  io::write_magic(out, kMagic);
  io::write_u64(out, size_);
  io::write_u64(out, 0);
  for (Word w : words_) io::write_u64(out, w);
  if (!out) throw std::runtime_error("failed writing bit vector");
}

BitVector BitVector::load(std::istream& in) {
  io::expect_magic(in, kMagic);
  std::uint64_t const n = io::read_u64(in, "bit count");
  if (io::read_u64(in, "reserved header field") != 0) {
    throw ParseError(ParseError::Kind::bad_header, "reserved header field is not zero");
  }
  auto words = io::read_values<Word>(in, words_for_bits(n),
                                     [](std::istream& s) { return io::read_u64(s, "payload"); });
  if (n % 64 != 0 && (words.back() >> (n % 64)) != 0) {
    throw ParseError(ParseError::Kind::bad_payload, "padding bits past the end are not zero");
  }
  return from_words(std::move(words), n);
}

void BitVector::save_file(std::filesystem::path const& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save(out);
}

BitVector BitVector::load_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load(in);
}

}  // namespace selbv
