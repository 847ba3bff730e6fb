#include "selbv/bench.hpp"

#include <charconv>
#include <chrono>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "selbv/random.hpp"

namespace selbv::bench {

namespace {

inline void clobber_memory() { asm volatile("" : : : "memory"); }

template <class T>
inline void do_not_optimize(T const& value) {
  asm volatile("" : : "r,m"(value) : "memory");
}

/// Runs pass() once untimed, then `iterations` timed passes.
template <class Pass>
BenchRecord time_passes(BenchConfig const& config, Pass&& pass) {
  using Clock = std::chrono::steady_clock;
  BenchRecord record;
  record.config = config;
  record.checksum = pass();
  record.ns_per_op.reserve(config.iterations);
  for (std::uint64_t it = 0; it < config.iterations; ++it) {
    clobber_memory();
    auto const start = Clock::now();
    std::uint64_t const checksum = pass();
    auto const stop = Clock::now();
    do_not_optimize(checksum);
    if (checksum != record.checksum) {
      throw std::logic_error("checksum changed between benchmark iterations");
    }
    double const ns = std::chrono::duration<double, std::nano>(stop - start).count();
    record.ns_per_op.push_back(ns / static_cast<double>(config.ops));
  }
  record.ns_per_op_mean =
      std::accumulate(record.ns_per_op.begin(), record.ns_per_op.end(), 0.0) /
      static_cast<double>(record.ns_per_op.size());
  return record;
}

template <class Index>
BenchRecord bench_index(BenchConfig const& config, BitVector const& bv, Index const& index) {
  config.validate();
  auto const queries = gen_queries(bv, config.ops, config.seed);
  return with_word_selector(config.backend, [&](auto sel) {
    return time_passes(config, [&] {
      std::uint64_t checksum = 0;
      for (std::uint64_t r : queries) {
        checksum = fold_checksum(checksum, index.select_with(bv, r, sel));
      }
      return checksum;
    });
  });
}

std::string format_fixed2(double v) {
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string format_shortest(double v) {
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t const end = s.find(sep, start);
    parts.push_back(s.substr(start, end - start));
    if (end == std::string_view::npos) return parts;
    start = end + 1;
  }
}

template <class T>
T parse_number(std::string_view field, std::string_view what) {
  T value{};
  auto const res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("malformed CSV field " + std::string(what) + ": '" +
                                std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::word_register: return "word_register";
    case Benchmark::word_random: return "word_random";
    case Benchmark::vector_select: return "vector_select";
  }
  return "?";
}

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::none: return "none";
    case Structure::poppy: return "poppy";
    case Structure::clark: return "clark";
  }
  return "?";
}

Benchmark parse_benchmark(std::string_view name) {
  std::string n(name);
  for (char& c : n) {
    if (c == '-') c = '_';
  }
  if (n == "word_register") return Benchmark::word_register;
  if (n == "word_random") return Benchmark::word_random;
  if (n == "vector_select") return Benchmark::vector_select;
  throw std::invalid_argument("unknown benchmark: " + std::string(name));
}

Structure parse_structure(std::string_view name) {
  if (name == "none") return Structure::none;
  if (name == "poppy") return Structure::poppy;
  if (name == "clark") return Structure::clark;
  throw std::invalid_argument("unknown structure: " + std::string(name));
}

void BenchConfig::validate() const {
  if (ops < 1) throw std::invalid_argument("ops must be at least 1");
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (log2_n < 10 || log2_n > 40) throw std::invalid_argument("log2_n must be in [10, 40]");
}

std::vector<std::uint64_t> gen_queries(BitVector const& bv, std::uint64_t ops,
                                       std::uint64_t seed) {
  std::uint64_t const ones = bv.count_ones();
  if (ones == 0) throw std::invalid_argument("cannot generate select queries without ones");
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> queries(ops);
  for (auto& q : queries) q = rng.below(ones) + 1;
  return queries;
}

BenchRecord bench_word_register(BenchConfig const& config) {
  config.validate();
  SplitMix64 rng(config.seed);
  Word x = 0;
  while (x == 0) x = rng.next();
  unsigned const ones = popcount64(x);
  std::vector<std::uint8_t> js(config.ops);
  for (auto& j : js) j = static_cast<std::uint8_t>(rng.below(ones));

  return with_word_selector(config.backend, [&](auto sel) {
    return time_passes(config, [&] {
      Word word = x;
      do_not_optimize(word);
      std::uint64_t checksum = 0;
      for (std::uint8_t j : js) checksum = fold_checksum(checksum, sel(word, j));
      return checksum;
    });
  });
}

BenchRecord bench_word_random(BenchConfig const& config, BitVector const& bv) {
  config.validate();
  auto const words = bv.words();
  bool any = false;
  for (Word w : words) {
    if (w != 0) {
      any = true;
      break;
    }
  }
  if (!any) throw std::invalid_argument("bit vector has no nonzero words");

  SplitMix64 rng(config.seed);
  std::vector<std::uint64_t> word_ids(config.ops);
  std::vector<std::uint8_t> js(config.ops);
  for (std::uint64_t i = 0; i < config.ops; ++i) {
    std::uint64_t w;
    do {
      w = rng.below(words.size());
    } while (words[w] == 0);
    word_ids[i] = w;
    js[i] = static_cast<std::uint8_t>(rng.below(popcount64(words[w])));
  }

  return with_word_selector(config.backend, [&](auto sel) {
    return time_passes(config, [&] {
      std::uint64_t checksum = 0;
      for (std::uint64_t i = 0; i < word_ids.size(); ++i) {
        checksum = fold_checksum(checksum, sel(words[word_ids[i]], js[i]));
      }
      return checksum;
    });
  });
}

BenchRecord bench_vector_select(BenchConfig const& config, BitVector const& bv,
                                PoppyIndex const& index) {
  return bench_index(config, bv, index);
}

BenchRecord bench_vector_select(BenchConfig const& config, BitVector const& bv,
                                ClarkSelectIndex const& index) {
  return bench_index(config, bv, index);
}

BenchRecord bench_vector_select(BenchConfig const& config, BitVector const& bv) {
  switch (config.structure) {
    case Structure::poppy:
      return bench_vector_select(config, bv, PoppyIndex(bv, PoppyIndex::kDefaultSampling,
                                                        config.backend));
    case Structure::clark:
      return bench_vector_select(config, bv, ClarkSelectIndex(bv, config.backend));
    case Structure::none: break;
  }
  throw std::invalid_argument("vector select needs a structure (poppy or clark)");
}

bool checksums_consistent(std::span<BenchRecord const> records) {
  using Key = std::tuple<Benchmark, unsigned, double, std::uint64_t, std::uint64_t>;
  std::map<Key, std::uint64_t> seen;
  for (auto const& r : records) {
    Key const key{r.config.benchmark, r.config.log2_n, r.config.density, r.config.ops,
                  r.config.seed};
    auto const [it, inserted] = seen.emplace(key, r.checksum);
    if (!inserted && it->second != r.checksum) return false;
  }
  return true;
}

void write_csv(std::span<BenchRecord const> records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (auto const& r : records) {
    auto const& c = r.config;
    out << to_string(c.benchmark) << ',' << to_string(c.structure) << ','
        << selbv::to_string(c.backend) << ',' << c.log2_n << ',' << format_shortest(c.density)
        << ',' << c.ops << ',' << c.iterations << ',' << c.seed << ','
        << format_fixed2(r.ns_per_op_mean) << ',';
    for (std::size_t i = 0; i < r.ns_per_op.size(); ++i) {
      if (i) out << ';';
      out << format_fixed2(r.ns_per_op[i]);
    }
    out << ',' << r.checksum << '\n';
  }
  if (!out) throw std::runtime_error("failed writing CSV");
}

std::vector<BenchRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("missing or unexpected CSV header");
  }
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto const f = split(line, ',');
    if (f.size() != 11) throw std::invalid_argument("CSV row has wrong field count: " + line);
    BenchRecord r;
    r.config.benchmark = parse_benchmark(f[0]);
    r.config.structure = parse_structure(f[1]);
    r.config.backend = parse_backend(f[2]);
    r.config.log2_n = parse_number<unsigned>(f[3], "log2_n");
    r.config.density = parse_number<double>(f[4], "density");
    r.config.ops = parse_number<std::uint64_t>(f[5], "ops");
    r.config.iterations = parse_number<std::uint64_t>(f[6], "iterations");
    r.config.seed = parse_number<std::uint64_t>(f[7], "seed");
    r.ns_per_op_mean = parse_number<double>(f[8], "ns_per_op_mean");
    if (!f[9].empty()) {
      for (auto v : split(f[9], ';')) r.ns_per_op.push_back(parse_number<double>(v, "ns_per_op"));
    }
    r.checksum = parse_number<std::uint64_t>(f[10], "checksum");
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace selbv::bench
