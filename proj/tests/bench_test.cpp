#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "b2/bench.hpp"
#include "b2/oracle.hpp"

using namespace b2;

namespace {

std::vector<std::string> random_words(std::mt19937& rng, std::size_t count,
                                      int alphabet, std::size_t min_len,
                                      std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::set<std::string> out;
  while (out.size() < count) {
    std::string w;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i)
      w.push_back(static_cast<char>('a' + sym(rng)));
    out.insert(w);
  }
  return {out.begin(), out.end()};
}

std::string homogeneous_corpus(std::mt19937& rng,
                               const std::vector<std::string>& words,
                               std::size_t target, int alphabet) {
  std::string corpus;
  corpus.reserve(target + 16);
  while (corpus.size() < target) {
    if (rng() % 30 == 0)
      corpus += words[rng() % words.size()];
    else
      corpus.push_back(static_cast<char>('a' + rng() % alphabet));
  }
  corpus.resize(target);
  return corpus;
}

}  // namespace

TEST_CASE("bench runs all three cost variants with consistent match counts") {
  std::mt19937 rng(42);
  auto words = random_words(rng, 30, 8, 4, 12);
  auto ps = validate_patterns(words);
  auto corpus = homogeneous_corpus(rng, words, 1 << 18, 8);

  BenchConfig config;
  config.repeat = 1;
  auto outcome = bench_run(ps, corpus, config);

  REQUIRE(outcome.variants.size() == 3);
  CHECK(outcome.variants[0].name == "min");
  CHECK(outcome.variants[1].name == "rare-strings");
  CHECK(outcome.variants[2].name == "rare-input");
  CHECK(outcome.bytes_consumed == corpus.size());

  auto truth = naive_match(ps, corpus).size();
  for (const auto& v : outcome.variants) {
    CHECK(v.match_count == truth);
    CHECK(v.motif_count > 0);
    CHECK(v.throughput_mbit > 0.0);
    CHECK(v.memory_bytes > 0);
  }
  CHECK(outcome.baseline.name == "ac");
  CHECK(outcome.baseline.match_count == truth);
  CHECK(outcome.baseline.memory_bytes > 0);
}

TEST_CASE("estimated probability tracks the measured harvest rate") {
  // stats come from the scanned input's own first third, so the estimate
  // must sit within 0.05 of harvest/probes and inside [0,1]
  std::mt19937 rng(7);
  auto words = random_words(rng, 40, 12, 5, 12);
  auto ps = validate_patterns(words);
  auto corpus = homogeneous_corpus(rng, words, 1 << 20, 12);

  BenchConfig config;
  config.repeat = 1;
  auto outcome = bench_run(ps, corpus, config);
  for (const auto& v : outcome.variants) {
    CHECK(v.actual_probability >= 0.0);
    CHECK(v.actual_probability <= 1.0);
    CHECK(v.est_probability >= 0.0);
    CHECK(std::abs(v.est_probability - v.actual_probability) <= 0.05);
  }
}

TEST_CASE("repeat count changes timing only, never match counts") {
  std::mt19937 rng(9);
  auto words = random_words(rng, 10, 6, 4, 9);
  auto ps = validate_patterns(words);
  auto corpus = homogeneous_corpus(rng, words, 1 << 16, 6);

  BenchConfig one;
  one.repeat = 1;
  BenchConfig five;
  five.repeat = 5;
  auto a = bench_run(ps, corpus, one);
  auto b = bench_run(ps, corpus, five);
  REQUIRE(a.variants.size() == b.variants.size());
  for (std::size_t i = 0; i < a.variants.size(); ++i) {
    CHECK(a.variants[i].match_count == b.variants[i].match_count);
    CHECK(a.variants[i].motif_count == b.variants[i].motif_count);
    CHECK(a.variants[i].harvest_count == b.variants[i].harvest_count);
  }
  CHECK(a.baseline.match_count == b.baseline.match_count);
}

TEST_CASE("the stride-2 engine outruns the naive baseline at 1 MiB") {
  std::mt19937 rng(13);
  auto words = random_words(rng, 100, 16, 4, 16);
  auto ps = validate_patterns(words);
  auto corpus = homogeneous_corpus(rng, words, 1 << 20, 16);

  BenchConfig config;
  config.baseline = Baseline::naive;
  config.repeat = 3;
  auto outcome = bench_run(ps, corpus, config);
  CHECK(outcome.baseline.name == "naive");

  double best = 0.0;
  for (const auto& v : outcome.variants)
    best = std::max(best, v.throughput_mbit);
  CHECK(best > outcome.baseline.throughput_mbit);
}

TEST_CASE("the formatted table lists every variant and the baseline") {
  std::mt19937 rng(5);
  auto words = random_words(rng, 5, 4, 3, 8);
  auto ps = validate_patterns(words);
  auto corpus = homogeneous_corpus(rng, words, 1 << 14, 4);

  BenchConfig config;
  config.repeat = 1;
  auto table = format_bench_table(bench_run(ps, corpus, config));
  CHECK(table.find("min") != std::string::npos);
  CHECK(table.find("rare-strings") != std::string::npos);
  CHECK(table.find("rare-input") != std::string::npos);
  CHECK(table.find("ac") != std::string::npos);
  CHECK(table.find("Mbit/s") != std::string::npos);
  CHECK(table.find("bytes consumed: 16384") != std::string::npos);
}
