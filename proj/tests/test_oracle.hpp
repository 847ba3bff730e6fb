#pragma once

// Reference answers for tests, derived only from BitVector::get so they stay
// independent of every index and word-select path under test.

#include <cstdint>
#include <vector>

#include "selbv/bit_vector.hpp"

namespace selbv::test_support {

class ScanOracle {
 public:
  explicit ScanOracle(BitVector const& bv) {
    prefix_.reserve(bv.size() / 64 + 1);
    for (std::uint64_t i = 0; i < bv.size(); ++i) {
      if (i % 64 == 0) prefix_.push_back(ones_.size());
      if (bv.get(i)) ones_.push_back(i);
    }
  }

  std::uint64_t count() const { return ones_.size(); }
  /// 1-based r.
  std::uint64_t select(std::uint64_t r) const { return ones_[r - 1]; }
  /// Ones in B[0..j].
  std::uint64_t rank(BitVector const& bv, std::uint64_t j) const {
    std::uint64_t r = prefix_[j / 64];
    for (std::uint64_t i = j / 64 * 64; i <= j; ++i) r += bv.get(i);
    return r;
  }

 private:
  std::vector<std::uint64_t> ones_;
  std::vector<std::uint64_t> prefix_;
};

/// The 12-bit example vector 100101001010, B[i] at position i.
inline BitVector worked_example() { return BitVector::from_string("100101001010"); }

/// Same vector as one word: bits {0, 3, 5, 8, 10}.
inline constexpr std::uint64_t kWorkedExampleWord =
    (1ULL << 0) | (1ULL << 3) | (1ULL << 5) | (1ULL << 8) | (1ULL << 10);

}  // namespace selbv::test_support
