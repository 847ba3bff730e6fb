#include "selbv/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "selbv/bench.hpp"
#include "selbv/bit_vector.hpp"
#include "selbv/clark_select.hpp"
#include "selbv/poppy.hpp"
#include "selbv/verify.hpp"
#include "selbv/word_select.hpp"

namespace selbv::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(std::string const& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t const end = s.find(',', start);
    std::string part = s.substr(start, end - start);
    if (!part.empty()) parts.push_back(part);
    if (end == std::string::npos) return parts;
    start = end + 1;
  }
}

template <class T>
T to_number(std::string_view text, std::string_view flag) {
  T value{};
  auto const res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(flag));
  }
  return value;
}

/// Values above 1 are percentages, the rest fractions.
double parse_density(std::string_view text) {
  double v = to_number<double>(text, "--density");
  if (v > 1.0) v /= 100.0;
  if (!(v >= 0.0 && v <= 1.0)) throw UsageError("density out of range: " + std::string(text));
  return v;
}

std::vector<double> parse_densities(std::string const& text) {
  std::vector<double> out;
  for (auto const& p : split_list(text)) out.push_back(parse_density(p));
  if (out.empty()) throw UsageError("--density needs at least one value");
  return out;
}

/// "A..B" expands to A, A+2, ... <= B. Also accepts "A" and "A,B,C".
std::vector<unsigned> parse_log2n(std::string const& text) {
  std::vector<unsigned> out;
  if (auto const dots = text.find(".."); dots != std::string::npos) {
    auto const lo = to_number<unsigned>(std::string_view(text).substr(0, dots), "--log2n");
    auto const hi = to_number<unsigned>(std::string_view(text).substr(dots + 2), "--log2n");
    if (lo > hi) throw UsageError("--log2n range is empty: " + text);
    for (unsigned v = lo; v <= hi; v += 2) out.push_back(v);
  } else {
    for (auto const& p : split_list(text)) out.push_back(to_number<unsigned>(p, "--log2n"));
  }
  for (unsigned v : out) {
    if (v < 10 || v > 40) throw UsageError("--log2n values must be in [10, 40]");
  }
  if (out.empty()) throw UsageError("--log2n needs at least one value");
  return out;
}

std::vector<WordSelectBackend> parse_backends(std::string const& text) {
  if (text == "all") {
    return {WordSelectBackend::ptselect, WordSelectBackend::broadword,
            WordSelectBackend::bytescan, WordSelectBackend::oracle};
  }
  std::vector<WordSelectBackend> out;
  for (auto const& p : split_list(text)) {
    try {
      out.push_back(resolve_backend(parse_backend(p)));
    } catch (std::invalid_argument const& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--backend needs at least one value");
  return out;
}

std::vector<bench::Structure> parse_structures(std::string const& text) {
  if (text == "both") return {bench::Structure::poppy, bench::Structure::clark};
  if (text == "poppy") return {bench::Structure::poppy};
  if (text == "clark") return {bench::Structure::clark};
  throw UsageError("--structure must be poppy, clark or both");
}

int cmd_info(std::ostream& out) {
  auto const& f = detect_features();
  auto const yes_no = [](bool b) { return b ? "yes" : "no"; };
  out << "popcnt: " << yes_no(f.has_popcnt) << '\n'
      << "tzcnt (bmi1): " << yes_no(f.has_tzcnt) << '\n'
      << "pdep (bmi2): " << yes_no(f.has_bmi2) << '\n'
      << "auto backend: " << to_string(resolve_backend(WordSelectBackend::automatic)) << '\n';
  return kExitOk;
}

struct GenArgs {
  std::uint64_t bits = 0;
  std::string density = "0.5";
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_gen(GenArgs const& a, std::ostream& out) {
  double const d = parse_density(a.density);
  auto const bv = BitVector::from_random(a.bits, d, a.seed);
  bv.save_file(a.out);
  out << "wrote " << a.out << ": " << bv.size() << " bits, " << bv.count_ones() << " ones\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string in;
  std::string structure = "both";
  std::string backend = "all";
  std::uint64_t sampling = PoppyIndex::kDefaultSampling;
  std::uint64_t queries = 100'000;
  std::uint64_t seed = 1;
};

int cmd_verify(VerifyArgs const& a, std::ostream& out) {
  VerifyOptions o;
  auto const structures = parse_structures(a.structure);
  o.poppy = o.clark = false;
  for (auto s : structures) (s == bench::Structure::poppy ? o.poppy : o.clark) = true;
  o.backends = parse_backends(a.backend);
  o.sampling = a.sampling;
  o.random_queries = a.queries;
  o.seed = a.seed;
  if (o.sampling == 0 || o.sampling % 64 != 0) {
    throw UsageError("--k must be a positive multiple of 64");
  }

  auto const bv = BitVector::load_file(a.in);
  out << "loaded " << a.in << ": " << bv.size() << " bits, " << bv.count_ones() << " ones\n";
  bool ok = true;
  for (auto const& r : verify_all(bv, o)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks)";
    if (!r.passed) out << ": " << r.first_failure;
    out << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitFailed;
}

struct BenchArgs {
  std::string benchmark = "vector-select";
  std::string structure = "both";
  std::string backend = "ptselect,broadword,bytescan";
  std::string log2n = "20..28";
  std::string density = "90,50,10";
  std::uint64_t ops = 1'000'000;
  std::uint64_t iterations = 10;
  std::uint64_t seed = 42;
  std::string csv = "-";
};

int cmd_bench(BenchArgs const& a, std::ostream& out) {
  bench::Benchmark benchmark;
  try {
    benchmark = bench::parse_benchmark(a.benchmark);
  } catch (std::invalid_argument const& e) {
    throw UsageError(e.what());
  }
  auto const structures = parse_structures(a.structure);
  auto const backends = parse_backends(a.backend);
  auto const sizes = parse_log2n(a.log2n);
  auto const densities = parse_densities(a.density);
  if (a.ops < 1 || a.iterations < 1) throw UsageError("--ops and --iters must be at least 1");

  std::ofstream file;
  std::ostream* csv = &out;
  if (a.csv != "-") {
    file.open(a.csv);
    if (!file) throw std::runtime_error("cannot open " + a.csv + " for writing");
    csv = &file;
  }

  std::vector<bench::BenchRecord> records;
  auto const report = [&](bench::BenchRecord record) {
    if (csv != &out) {
      auto const& c = record.config;
      out << bench::to_string(c.benchmark) << ' ' << bench::to_string(c.structure) << ' '
          << to_string(c.backend) << " log2_n=" << c.log2_n << " density=" << c.density << ": "
          << std::fixed << std::setprecision(2) << record.ns_per_op_mean << " ns/op\n"
          << std::defaultfloat;
    }
    records.push_back(std::move(record));
  };

  bench::BenchConfig base;
  base.benchmark = benchmark;
  base.ops = a.ops;
  base.iterations = a.iterations;
  base.seed = a.seed;

  if (benchmark == bench::Benchmark::word_register) {
    // No vector involved; the first size and density are echoed for the CSV.
    base.log2_n = sizes.front();
    base.density = densities.front();
    for (auto backend : backends) {
      auto c = base;
      c.backend = backend;
      report(bench::bench_word_register(c));
    }
  } else {
    for (unsigned log2_n : sizes) {
      for (double density : densities) {
        auto const bv = BitVector::from_random(std::uint64_t{1} << log2_n, density, a.seed);
        auto c = base;
        c.log2_n = log2_n;
        c.density = density;
        if (benchmark == bench::Benchmark::word_random) {
          for (auto backend : backends) {
            c.backend = backend;
            report(bench::bench_word_random(c, bv));
          }
          continue;
        }
        for (auto structure : structures) {
          c.structure = structure;
          if (structure == bench::Structure::poppy) {
            PoppyIndex const idx(bv);
            for (auto backend : backends) {
              c.backend = backend;
              report(bench::bench_vector_select(c, bv, idx));
            }
          } else {
            ClarkSelectIndex const idx(bv);
            for (auto backend : backends) {
              c.backend = backend;
              report(bench::bench_vector_select(c, bv, idx));
            }
          }
        }
      }
    }
  }

  bench::write_csv(records, *csv);
  if (!bench::checksums_consistent(records)) {
    out << "checksum mismatch between backends or structures\n";
    return kExitFailed;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank/select bit vectors with swappable machine-word select", "selbv"};
  app.require_subcommand(1);

  app.add_subcommand("info", "Print CPU features and the resolved auto backend");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a random bit vector file");
  gen_cmd->add_option("--bits", gen.bits, "Length in bits")->required();
  gen_cmd->add_option("--density", gen.density, "Fraction or percentage of ones")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "SplitMix64 seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output file")->required();

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check indexes against naive oracles");
  verify_cmd->add_option("--in", ver.in, "Bit vector file")->required();
  verify_cmd->add_option("--structure", ver.structure, "poppy, clark or both")
      ->capture_default_str();
  verify_cmd->add_option("--backend", ver.backend, "Comma list of backends, or all")
      ->capture_default_str();
  verify_cmd->add_option("--k", ver.sampling, "Poppy sampling interval")->capture_default_str();
  verify_cmd->add_option("--queries", ver.queries, "Random queries per suite")
      ->capture_default_str();
  verify_cmd->add_option("--seed", ver.seed, "Query seed")->capture_default_str();

  BenchArgs ben;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
  bench_cmd->add_option("--benchmark", ben.benchmark, "word-register, word-random or vector-select")
      ->capture_default_str();
  bench_cmd->add_option("--structure", ben.structure, "poppy, clark or both")
      ->capture_default_str();
  bench_cmd->add_option("--backend", ben.backend, "Comma list of backends, or all")
      ->capture_default_str();
  bench_cmd->add_option("--log2n", ben.log2n, "A..B (step 2) or comma list")
      ->capture_default_str();
  bench_cmd->add_option("--density", ben.density, "Comma list of fractions or percentages")
      ->capture_default_str();
  bench_cmd->add_option("--ops", ben.ops, "Operations per iteration")->capture_default_str();
  bench_cmd->add_option("--iters", ben.iterations, "Timed iterations")->capture_default_str();
  bench_cmd->add_option("--seed", ben.seed, "Seed for vectors and queries")
      ->capture_default_str();
  bench_cmd->add_option("--csv", ben.csv, "CSV output file, - for stdout")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (CLI::ParseError const& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("info")) return cmd_info(out);
    if (app.got_subcommand(gen_cmd)) return cmd_gen(gen, out);
    if (app.got_subcommand(verify_cmd)) return cmd_verify(ver, out);
    return cmd_bench(ben, out);
  } catch (UsageError const& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace selbv::cli
