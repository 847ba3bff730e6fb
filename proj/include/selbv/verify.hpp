#pragma once

// Oracle checks run by `selbv verify`: each suite cross-checks one part of the
// library against answers computed bit by bit from BitVector::get.

#include <cstdint>
#include <string>
#include <vector>

#include "selbv/bit_vector.hpp"
#include "selbv/word_select.hpp"

namespace selbv {

struct VerifyOptions {
  bool poppy = true;
  bool clark = true;
  std::vector<WordSelectBackend> backends = {WordSelectBackend::ptselect,
                                             WordSelectBackend::broadword,
                                             WordSelectBackend::bytescan,
                                             WordSelectBackend::oracle};
  std::uint64_t sampling = 8192;
  std::uint64_t random_queries = 100'000;
  std::uint64_t seed = 1;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t checks = 0;
  std::string first_failure;
};

std::vector<SuiteResult> verify_all(BitVector const& bv, VerifyOptions const& options);

}  // namespace selbv
