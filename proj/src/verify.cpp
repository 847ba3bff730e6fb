#include "selbv/verify.hpp"

#include <algorithm>
#include <sstream>

#include "selbv/clark_select.hpp"
#include "selbv/poppy.hpp"
#include "selbv/random.hpp"

namespace selbv {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  template <class Msg>
  void check(bool ok, Msg&& describe) {
    ++result_.checks;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.first_failure = describe();
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

/// Answers computed from get() alone.
struct DenseOracle {
  std::vector<std::uint64_t> ones;         // positions, ascending
  std::vector<std::uint64_t> word_prefix;  // ones before each word

  explicit DenseOracle(BitVector const& bv) {
    word_prefix.reserve(bv.num_words() + 1);
    for (std::uint64_t i = 0; i < bv.size(); ++i) {
      if (i % 64 == 0) word_prefix.push_back(ones.size());
      if (bv.get(i)) ones.push_back(i);
    }
  }

  std::uint64_t rank(BitVector const& bv, std::uint64_t j) const {
    std::uint64_t r = word_prefix[j / 64];
    for (std::uint64_t i = j / 64 * 64; i <= j; ++i) r += bv.get(i);
    return r;
  }
  std::uint64_t select(std::uint64_t r) const { return ones[r - 1]; }
};

std::vector<std::uint64_t> select_queries(std::uint64_t ones, VerifyOptions const& o) {
  std::vector<std::uint64_t> q;
  if (ones == 0) return q;
  SplitMix64 rng(o.seed);
  for (std::uint64_t i = 0; i < o.random_queries; ++i) q.push_back(rng.below(ones) + 1);
  q.push_back(1);
  q.push_back(ones);
  for (std::uint64_t step : {std::uint64_t{64}, std::uint64_t{4096}, o.sampling}) {
    for (std::uint64_t r = step; r <= ones; r += step) {
      q.push_back(r);
      if (r + 1 <= ones) q.push_back(r + 1);
    }
  }
  return q;
}

std::vector<std::uint64_t> rank_queries(std::uint64_t n, VerifyOptions const& o) {
  std::vector<std::uint64_t> q;
  if (n == 0) return q;
  SplitMix64 rng(o.seed ^ 0x5EED);
  for (std::uint64_t i = 0; i < o.random_queries; ++i) q.push_back(rng.below(n));
  q.push_back(0);
  q.push_back(n - 1);
  for (std::uint64_t edge = 64; edge < n; edge += 64) {
    if (edge % PoppyIndex::kBasicBlockBits == 0) {
      q.push_back(edge - 1);
      q.push_back(edge);
    }
  }
  return q;
}

std::string at(std::string_view what, std::uint64_t arg, std::uint64_t got, std::uint64_t want) {
  std::ostringstream s;
  s << what << '(' << arg << ") = " << got << ", expected " << want;
  return s.str();
}

SuiteResult check_bitvector(BitVector const& bv, DenseOracle const& oracle,
                            std::vector<std::uint64_t> const& sq) {
  Suite s("bitvector");
  s.check(bv.num_words() == words_for_bits(bv.size()), [] { return "word count mismatch"; });
  if (bv.size() % 64 != 0) {
    s.check((bv.words().back() >> (bv.size() % 64)) == 0,
            [] { return "padding bits are not zero"; });
  }
  s.check(bv.count_ones() == oracle.ones.size(), [] { return "count_ones mismatch"; });
  // rank_naive/select_naive are linear scans; spot-check a bounded subset.
  std::size_t const limit = std::min<std::size_t>(sq.size(), 200);
  for (std::size_t i = 0; i < limit; ++i) {
    std::uint64_t const r = sq[i];
    std::uint64_t const p = bv.select_naive(r);
    s.check(p == oracle.select(r), [&] { return at("select_naive", r, p, oracle.select(r)); });
    std::uint64_t const back = bv.rank_naive(p);
    s.check(back == r, [&] { return at("rank_naive", p, back, r); });
  }
  return s.take();
}

SuiteResult check_word_select(BitVector const& bv, VerifyOptions const& o) {
  Suite s("word_select");
  std::uint64_t const limit = std::min<std::uint64_t>(bv.num_words(), 1 << 16);
  for (std::uint64_t w = 0; w < limit; ++w) {
    Word const x = bv.word(w);
    for (unsigned j = 0; j <= 64; ++j) {
      unsigned const want = select_word_oracle(x, j);
      for (auto b : o.backends) {
        unsigned const got = select_word(b, x, j);
        s.check(got == want, [&] {
          std::ostringstream m;
          m << to_string(b) << " select(0x" << std::hex << x << std::dec << ", " << j
            << ") = " << got << ", expected " << want;
          return m.str();
        });
      }
    }
  }
  return s.take();
}

SuiteResult check_poppy_tables(BitVector const& bv, PoppyIndex const& idx,
                               DenseOracle const& oracle) {
  Suite s("poppy_tables");
  auto const& l0 = idx.l0();
  s.check(l0.empty() || l0[0] == 0, [] { return "L0[0] != 0"; });
  for (std::size_t u = 0; u < l0.size(); ++u) {
    std::uint64_t const first_bit = u * PoppyIndex::kUpperBlockBits;
    s.check(l0[u] == oracle.word_prefix[first_bit / 64], [&] { return "L0 entry wrong"; });
    if (u) s.check(l0[u] >= l0[u - 1], [] { return "L0 decreasing"; });
  }
  auto const& l1l2 = idx.l1l2();
  for (std::uint64_t lb = 0; lb < l1l2.size(); ++lb) {
    std::uint64_t const upper = lb / PoppyIndex::kLowerBlocksPerUpper;
    std::uint64_t const first_word = lb * PoppyIndex::kWordsPerLowerBlock;
    std::uint64_t const want = oracle.word_prefix[first_word] - l0[upper];
    s.check(PoppyIndex::l1_of(l1l2[lb]) == want, [&] { return at("L1", lb, PoppyIndex::l1_of(l1l2[lb]), want); });
    for (unsigned b = 0; b < 3; ++b) {
      unsigned count = 0;
      for (std::uint64_t i = 0; i < PoppyIndex::kWordsPerBasicBlock; ++i) {
        std::uint64_t const w = first_word + b * PoppyIndex::kWordsPerBasicBlock + i;
        if (w < bv.num_words()) count += popcount64(bv.word(w));
      }
      s.check(PoppyIndex::l2_of(l1l2[lb], b) == count && count <= 512,
              [&] { return at("L2", lb * 4 + b, PoppyIndex::l2_of(l1l2[lb], b), count); });
    }
  }
  auto const& samples = idx.samples();
  auto const& offsets = idx.sample_offsets();
  for (std::size_t u = 0; u + 1 < offsets.size(); ++u) {
    s.check(samples[offsets[u]] == 0, [] { return "sample 0 is not 0"; });
    for (std::uint64_t i = 1; offsets[u] + i < offsets[u + 1]; ++i) {
      std::uint64_t const rank = l0[u] + i * idx.sampling();
      std::uint64_t const pos = u * PoppyIndex::kUpperBlockBits + samples[offsets[u] + i];
      s.check(pos == oracle.select(rank), [&] { return at("S", i, pos, oracle.select(rank)); });
    }
  }
  return s.take();
}

}  // namespace

std::vector<SuiteResult> verify_all(BitVector const& bv, VerifyOptions const& o) {
  std::vector<SuiteResult> results;
  DenseOracle const oracle(bv);
  auto const sq = select_queries(bv.count_ones(), o);
  auto const rq = rank_queries(bv.size(), o);

  results.push_back(check_bitvector(bv, oracle, sq));
  results.push_back(check_word_select(bv, o));

  std::vector<std::vector<std::uint64_t>> answers;  // per structure, for agreement

  if (o.poppy) {
    PoppyIndex const idx(bv, o.sampling);
    results.push_back(check_poppy_tables(bv, idx, oracle));

    Suite rank("poppy_rank");
    for (std::uint64_t j : rq) {
      std::uint64_t const got = idx.rank(bv, j);
      std::uint64_t const want = oracle.rank(bv, j);
      rank.check(got == want, [&] { return at("rank", j, got, want); });
    }
    results.push_back(rank.take());

    Suite sel("poppy_select");
    std::vector<std::uint64_t> poppy_answers;
    for (auto b : o.backends) {
      bool const keep = poppy_answers.empty();
      with_word_selector(b, [&](auto ws) {
        for (std::uint64_t r : sq) {
          std::uint64_t const got = idx.select_with(bv, r, ws);
          sel.check(got == oracle.select(r), [&] { return at("select", r, got, oracle.select(r)); });
          sel.check(idx.rank(bv, got) == r && bv.get(got),
                    [&] { return at("rank(select)", r, idx.rank(bv, got), r); });
          if (keep) poppy_answers.push_back(got);
        }
      });
    }
    results.push_back(sel.take());
    answers.push_back(std::move(poppy_answers));
  }

  if (o.clark) {
    ClarkSelectIndex const idx(bv);
    Suite tables("clark_tables");
    auto const& starts = idx.superblock_starts();
    for (std::uint64_t t = 0; t < starts.size(); ++t) {
      std::uint64_t const want_start = oracle.select(t * ClarkSelectIndex::kOnesPerSuperblock + 1);
      tables.check(starts[t] == want_start, [&] { return at("superblock_start", t, starts[t], want_start); });
      std::uint64_t const end = t + 1 < starts.size() ? starts[t + 1] : bv.size();
      bool const is_long = end - starts[t] >= idx.threshold();
      tables.check(is_long == (idx.kind(t) == ClarkSelectIndex::Kind::long_superblock),
                   [&] { return "superblock " + std::to_string(t) + " misclassified"; });
    }
    for (std::uint64_t p : idx.long_positions()) {
      tables.check(bv.get(p), [&] { return "long payload position " + std::to_string(p) + " is not a one"; });
    }
    results.push_back(tables.take());

    Suite sel("clark_select");
    std::vector<std::uint64_t> clark_answers;
    for (auto b : o.backends) {
      bool const keep = clark_answers.empty();
      with_word_selector(b, [&](auto ws) {
        for (std::uint64_t r : sq) {
          std::uint64_t const got = idx.select_with(bv, r, ws);
          sel.check(got == oracle.select(r), [&] { return at("select", r, got, oracle.select(r)); });
          if (keep) clark_answers.push_back(got);
        }
      });
    }
    results.push_back(sel.take());
    answers.push_back(std::move(clark_answers));
  }

  if (answers.size() == 2 && answers[0].size() == answers[1].size()) {
    Suite agree("cross_structure");
    for (std::size_t i = 0; i < sq.size(); ++i) {
      agree.check(answers[0][i] == answers[1][i],
                  [&] { return at("poppy vs clark select", sq[i], answers[0][i], answers[1][i]); });
    }
    results.push_back(agree.take());
  }
  return results;
}

}  // namespace selbv
