#pragma once

// Select, popcount, pdep and tzcnt on 64-bit machine words.
//
// Bit b of a word is its b-th least significant bit. Word-level select takes a
// 0-based j: select(x, j) is the position of the (j+1)-th set bit of x. When
// j >= popcount(x) every backend returns kNotFound (64), which is what
// tzcnt(pdep(1 << j, x)) naturally yields.

#include <bit>
#include <cstdint>
#include <string_view>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace selbv {

using Word = std::uint64_t;

inline constexpr unsigned kWordBits = 64;
inline constexpr unsigned kNotFound = 64;

struct CpuFeatures {
  bool has_bmi2 = false;
  bool has_popcnt = false;
  bool has_tzcnt = false;
};

/// Queries CPUID once; later calls return the cached result.
CpuFeatures const& detect_features();

enum class WordSelectBackend { ptselect, broadword, bytescan, oracle, automatic };

std::string_view to_string(WordSelectBackend backend);
/// Accepts "ptselect", "broadword", "bytescan", "oracle" and "auto".
/// Throws std::invalid_argument on anything else.
WordSelectBackend parse_backend(std::string_view name);

/// What `automatic` means on this machine: ptselect with BMI2 and TZCNT,
/// broadword otherwise. Never returns `automatic`.
WordSelectBackend resolve_backend(WordSelectBackend backend);

// ---------------------------------------------------------------------------
// Software primitives. These are bit-exact with the hardware instructions and
// serve both as the non-BMI2 fallback and as test oracles.

constexpr unsigned popcount_soft(Word x) {
  x = x - ((x >> 1) & 0x5555555555555555ULL);
  x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL);
  x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0FULL;
  return static_cast<unsigned>((x * 0x0101010101010101ULL) >> 56);
}

/// Trailing zeros; 64 for x == 0. (x & -x) - 1 has exactly tzcnt(x) low ones.
constexpr unsigned tzcnt_soft(Word x) { return popcount_soft((x & (0 - x)) - 1); }

/// Bit i of the result is bit j of v when bit i is the j-th (0-based) set bit
/// of mask, and 0 otherwise.
constexpr Word pdep_soft(Word v, Word mask) {
  Word result = 0;
  for (Word source_bit = 1; mask != 0; source_bit <<= 1) {
    if (v & source_bit) result |= mask & (0 - mask);
    mask &= mask - 1;
  }
  return result;
}

// Hardware instructions, compiled with per-function target attributes so they
// exist even in portable builds. Only call them when detect_features() says
// the CPU supports them. On non-x86 targets they forward to the soft versions.
Word pdep_hw(Word v, Word mask);
unsigned tzcnt_hw(Word x);
unsigned popcount_hw(Word x);

inline unsigned popcount64(Word x) {
#if defined(__POPCNT__)
  return static_cast<unsigned>(__builtin_popcountll(x));
#else
  return popcount_soft(x);
#endif
}

// ---------------------------------------------------------------------------
// Word select backends. All share one contract; see the file comment.

/// Reference implementation: walk the bits.
constexpr unsigned select_word_oracle(Word x, unsigned j) {
  unsigned seen = 0;
  for (unsigned b = 0; b < kWordBits; ++b) {
    if ((x >> b) & 1) {
      if (seen == j) return b;
      ++seen;
    }
  }
  return kNotFound;
}

/// pdep(1 << j, x) keeps only the (j+1)-th one of x; tzcnt reads its position.
inline unsigned select_word_ptselect(Word x, unsigned j) {
  Word const i = j < kWordBits ? Word{1} << j : 0;
#if defined(__BMI2__) && defined(__BMI__)
  return static_cast<unsigned>(_tzcnt_u64(_pdep_u64(i, x)));
#else
  return tzcnt_soft(pdep_soft(i, x));
#endif
}

namespace detail {
inline constexpr Word kOnesStep4 = 0x1111111111111111ULL;
inline constexpr Word kOnesStep8 = 0x0101010101010101ULL;
inline constexpr Word kMsbsStep8 = 0x80ULL * kOnesStep8;
inline constexpr Word kIncrStep8 = 0x8040201008040201ULL;

// Per byte: 1 if x <= y (bytes < 128), in the low bit of each byte.
constexpr Word leq_step8(Word x, Word y) {
  return ((((y | kMsbsStep8) - (x & ~kMsbsStep8)) ^ x ^ y) & kMsbsStep8) >> 7;
}
// Per byte: 1 if the byte is nonzero.
constexpr Word nonzero_step8(Word x) {
  return ((x | ((x | kMsbsStep8) - kOnesStep8)) & kMsbsStep8) >> 7;
}
}  // namespace detail

/// Branch-free select using only shifts, masks, adds and multiplies: byte-wise
/// prefix popcounts locate the byte, then the byte's bits are spread one per
/// byte and counted the same way.
constexpr unsigned select_word_broadword(Word x, unsigned j) {
  using namespace detail;
  Word byte_sums = x - ((x & 0xA * kOnesStep4) >> 1);
  byte_sums = (byte_sums & 3 * kOnesStep4) + ((byte_sums >> 2) & 3 * kOnesStep4);
  byte_sums = (byte_sums + (byte_sums >> 4)) & 0x0F * kOnesStep8;
  byte_sums *= kOnesStep8;  // byte i now holds popcount of bytes 0..i

  unsigned const total = static_cast<unsigned>(byte_sums >> 56);
  Word const k = j & 63;
  Word const k_step8 = k * kOnesStep8;
  // place would be 64 when j >= total; masking keeps the shifts defined and the
  // result is discarded below.
  unsigned const place =
      static_cast<unsigned>((leq_step8(byte_sums, k_step8) * kOnesStep8 >> 53) & 0x38);
  Word const byte_rank = k - (((byte_sums << 8) >> place) & 0xFF);
  Word const spread_bits = ((x >> place & 0xFF) * kOnesStep8) & kIncrStep8;
  Word const bit_sums = nonzero_step8(spread_bits) * kOnesStep8;
  Word const byte_rank_step8 = byte_rank * kOnesStep8;
  unsigned const pos =
      place + static_cast<unsigned>(leq_step8(bit_sums, byte_rank_step8) * kOnesStep8 >> 56);
  return j < total ? pos : kNotFound;
}

namespace detail {
/// entry[b][i]: position of the (i+1)-th one in byte b, 8 if absent.
struct ByteSelectTable {
  std::uint8_t entry[256][8];

  constexpr ByteSelectTable() : entry{} {
    for (unsigned b = 0; b < 256; ++b) {
      unsigned seen = 0;
      for (unsigned i = 0; i < 8; ++i) entry[b][i] = 8;
      for (unsigned bit = 0; bit < 8; ++bit) {
        if ((b >> bit) & 1) entry[b][seen++] = static_cast<std::uint8_t>(bit);
      }
    }
  }
};
inline constexpr ByteSelectTable kByteSelect{};
}  // namespace detail

/// Scan bytes from the low end accumulating popcounts, then finish inside the
/// byte with a 256x8 table.
inline unsigned select_word_bytescan(Word x, unsigned j) {
  for (unsigned byte = 0; byte < 8; ++byte) {
    unsigned const value = static_cast<unsigned>(x >> (8 * byte)) & 0xFF;
    unsigned const ones = popcount64(value);
    if (j < ones) return 8 * byte + detail::kByteSelect.entry[value][j];
    j -= ones;
  }
  return kNotFound;
}

/// Dispatches on the backend. `automatic` is resolved once per process.
unsigned select_word(WordSelectBackend backend, Word x, unsigned j);

// Function objects for templated hot loops, so that the backend is fixed
// before the loop starts.
struct PtSelect {
  unsigned operator()(Word x, unsigned j) const { return select_word_ptselect(x, j); }
};
struct BroadwordSelect {
  unsigned operator()(Word x, unsigned j) const { return select_word_broadword(x, j); }
};
struct ByteScanSelect {
  unsigned operator()(Word x, unsigned j) const { return select_word_bytescan(x, j); }
};
struct OracleSelect {
  unsigned operator()(Word x, unsigned j) const { return select_word_oracle(x, j); }
};

/// Calls fn(selector) with the function object for the resolved backend.
template <class Fn>
decltype(auto) with_word_selector(WordSelectBackend backend, Fn&& fn) {
  switch (resolve_backend(backend)) {
    case WordSelectBackend::ptselect: return fn(PtSelect{});
    case WordSelectBackend::broadword: return fn(BroadwordSelect{});
    case WordSelectBackend::bytescan: return fn(ByteScanSelect{});
    default: return fn(OracleSelect{});
  }
}

}  // namespace selbv
