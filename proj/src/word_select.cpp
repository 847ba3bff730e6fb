#include "selbv/word_select.hpp"

#include <stdexcept>
#include <string>

namespace selbv {

namespace {

#if defined(__x86_64__) || defined(__i386__)
#define SELBV_X86 1

__attribute__((target("bmi,bmi2"))) unsigned ptselect_hw(Word x, unsigned j) {
  Word const i = j < kWordBits ? Word{1} << j : 0;
  return static_cast<unsigned>(_tzcnt_u64(_pdep_u64(i, x)));
}
#endif

unsigned ptselect_soft(Word x, unsigned j) {
  Word const i = j < kWordBits ? Word{1} << j : 0;
  return tzcnt_soft(pdep_soft(i, x));
}

CpuFeatures query_cpu() {
  CpuFeatures f;
#ifdef SELBV_X86
  __builtin_cpu_init();
  f.has_bmi2 = __builtin_cpu_supports("bmi2");
  f.has_popcnt = __builtin_cpu_supports("popcnt");
  f.has_tzcnt = __builtin_cpu_supports("bmi");
#endif
  return f;
}

using SelectFn = unsigned (*)(Word, unsigned);

SelectFn resolve_ptselect() {
#ifdef SELBV_X86
  auto const& f = detect_features();
  if (f.has_bmi2 && f.has_tzcnt) return &ptselect_hw;
#endif
  return &ptselect_soft;
}

}  // namespace

CpuFeatures const& detect_features() {
  static CpuFeatures const features = query_cpu();
  return features;
}

std::string_view to_string(WordSelectBackend backend) {
  switch (backend) {
    case WordSelectBackend::ptselect: return "ptselect";
    case WordSelectBackend::broadword: return "broadword";
    case WordSelectBackend::bytescan: return "bytescan";
    case WordSelectBackend::oracle: return "oracle";
    case WordSelectBackend::automatic: return "auto";
  }
  return "?";
}

WordSelectBackend parse_backend(std::string_view name) {
  if (name == "ptselect") return WordSelectBackend::ptselect;
  if (name == "broadword") return WordSelectBackend::broadword;
  if (name == "bytescan") return WordSelectBackend::bytescan;
  if (name == "oracle") return WordSelectBackend::oracle;
  if (name == "auto") return WordSelectBackend::automatic;
  throw std::invalid_argument("unknown word select backend: " + std::string(name));
}

WordSelectBackend resolve_backend(WordSelectBackend backend) {
  if (backend != WordSelectBackend::automatic) return backend;
  static WordSelectBackend const resolved = [] {
    auto const& f = detect_features();
    return f.has_bmi2 && f.has_tzcnt ? WordSelectBackend::ptselect
                                     : WordSelectBackend::broadword;
  }();
  return resolved;
}

#ifdef SELBV_X86
__attribute__((target("bmi2"))) Word pdep_hw(Word v, Word mask) { return _pdep_u64(v, mask); }
__attribute__((target("bmi"))) unsigned tzcnt_hw(Word x) {
  return static_cast<unsigned>(_tzcnt_u64(x));
}
__attribute__((target("popcnt"))) unsigned popcount_hw(Word x) {
  return static_cast<unsigned>(__builtin_popcountll(x));
}
#else
Word pdep_hw(Word v, Word mask) { return pdep_soft(v, mask); }
unsigned tzcnt_hw(Word x) { return tzcnt_soft(x); }
unsigned popcount_hw(Word x) { return popcount_soft(x); }
#endif

unsigned select_word(WordSelectBackend backend, Word x, unsigned j) {
  static SelectFn const ptselect = resolve_ptselect();
  switch (resolve_backend(backend)) {
    case WordSelectBackend::ptselect: return ptselect(x, j);
    case WordSelectBackend::broadword: return select_word_broadword(x, j);
    case WordSelectBackend::bytescan: return select_word_bytescan(x, j);
    default: return select_word_oracle(x, j);
  }
}

}  // namespace selbv
