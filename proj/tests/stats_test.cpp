#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "b2/stats.hpp"

using namespace b2;

TEST_CASE("even-aligned collection counts pairs at even offsets only") {
  auto s = collect_stats("abcd", StatsMode::even_aligned);
  CHECK(s.total_pairs == 2);
  CHECK(s.counts[make_trace('a', 'b')] == 1);
  CHECK(s.counts[make_trace('c', 'd')] == 1);
  CHECK(s.counts[make_trace('b', 'c')] == 0);

  // odd length: the final byte has no partner
  s = collect_stats("abcde", StatsMode::even_aligned);
  CHECK(s.total_pairs == 2);
  CHECK(s.counts[make_trace('d', 'e')] == 0);
}

TEST_CASE("sliding collection counts every overlapping pair") {
  auto s = collect_stats("abcd", StatsMode::sliding);
  CHECK(s.total_pairs == 3);
  CHECK(s.counts[make_trace('b', 'c')] == 1);

  s = collect_stats("aaaa", StatsMode::sliding);
  CHECK(s.counts[make_trace('a', 'a')] == 3);
}

TEST_CASE("degenerate inputs produce zero pairs") {
  CHECK(collect_stats("", StatsMode::sliding).total_pairs == 0);
  CHECK(collect_stats("x", StatsMode::even_aligned).total_pairs == 0);
}

TEST_CASE("probability is count over total; zero pairs throws") {
  auto s = collect_stats("abab", StatsMode::even_aligned);
  CHECK(s.probability(make_trace('a', 'b')) == doctest::Approx(1.0));
  CHECK(s.probability(make_trace('b', 'a')) == doctest::Approx(0.0));
  TraceStats empty;
  CHECK_THROWS_AS(empty.probability(make_trace('a', 'b')), ZeroPairStats);
}

TEST_CASE("merge adds counts; mode mismatch rejected") {
  auto a = collect_stats("abab", StatsMode::even_aligned);
  auto b = collect_stats("abcd", StatsMode::even_aligned);
  a.merge(b);
  CHECK(a.total_pairs == 4);
  CHECK(a.counts[make_trace('a', 'b')] == 3);
  auto c = collect_stats("xy", StatsMode::sliding);
  CHECK_THROWS_AS(a.merge(c), std::invalid_argument);
}

TEST_CASE("stats json round trip is exact and deterministic") {
  std::mt19937 rng(7);
  std::string sample(5000, '\0');
  for (auto& ch : sample) ch = static_cast<char>(rng() & 0xff);
  auto s = collect_stats(sample, StatsMode::sliding);

  std::string j1 = stats_to_json(s);
  auto s2 = stats_from_json(j1);
  CHECK(s2.mode == s.mode);
  CHECK(s2.total_pairs == s.total_pairs);
  CHECK(s2.counts == s.counts);
  CHECK(stats_to_json(s2) == j1);
}

TEST_CASE("stats json rejects bad versions and modes") {
  CHECK_THROWS_AS(stats_from_json(R"({"version":2,"mode":"sliding",)"
                                  R"("total_pairs":0,"counts":{}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(stats_from_json(R"({"mode":"sliding","total_pairs":0,)"
                                  R"("counts":{}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(stats_from_json(R"({"version":1,"mode":"diagonal",)"
                                  R"("total_pairs":0,"counts":{}})"),
                  std::invalid_argument);
  CHECK_THROWS(stats_from_json("not json"));
}

TEST_CASE("unit cost is 1 for every trace") {
  auto ps = validate_patterns({"herd", "error"});
  CostFunction cf{CostKind::unit, nullptr, {}};
  CHECK(cost(cf, make_trace('e', 'r'), ps) == 1.0);
  CHECK(cost(cf, make_trace('z', 'z'), ps) == 1.0);
}

TEST_CASE("rare_in_strings cost counts sliding occurrences across patterns") {
  auto ps = validate_patterns(
      {"herd", "herbal", "error", "upper", "deeper", "ferrarri"});
  CostFunction cf{CostKind::rare_in_strings, nullptr, {}};
  // 'er' appears once in each of the six words.
  CHECK(cost(cf, make_trace('e', 'r'), ps) == 6.0);
  // 'rr' appears once in error, twice in ferrarri.
  CHECK(cost(cf, make_trace('r', 'r'), ps) == 3.0);
  CHECK(cost(cf, make_trace('h', 'e'), ps) == 2.0);
  CHECK(cost(cf, make_trace('z', 'z'), ps) == 0.0);
}

TEST_CASE("rare_in_input cost is the sampled probability") {
  auto ps = validate_patterns({"abc"});
  auto stats = std::make_shared<TraceStats>(
      collect_stats("ababcdcd", StatsMode::even_aligned));
  CostFunction cf{CostKind::rare_in_input, stats, {}};
  CHECK(cost(cf, make_trace('a', 'b'), ps) == doctest::Approx(0.5));
  CHECK(cost(cf, make_trace('c', 'd'), ps) == doctest::Approx(0.5));
  CHECK(cost(cf, make_trace('b', 'c'), ps) == doctest::Approx(0.0));
  CostFunction missing{CostKind::rare_in_input, nullptr, {}};
  CHECK_THROWS_AS(cost(missing, make_trace('a', 'b'), ps), MissingStats);
}

TEST_CASE("count_words is a sliding occurrence count per canonical pattern") {
  auto ps = validate_patterns({"aba", "bab"});
  auto wc = count_words(ps, "ababab");
  REQUIRE(wc.size() == 2);
  CHECK(wc[0] == 2);  // "aba" at 0 and 2
  CHECK(wc[1] == 2);  // "bab" at 1 and 3
}

TEST_CASE("conditional_fp cost rewards traces that imply their words") {
  auto ps = validate_patterns({"aba", "bab"});
  auto stats = std::make_shared<TraceStats>(
      collect_stats("ababab", StatsMode::sliding));
  CostFunction cf{CostKind::conditional_fp, stats,
                  count_words(ps, "ababab")};
  // counts: ab=3, ba=2. 'ab' is associated with both words:
  // P(aba|ab) = 2/3, P(bab|ab) = 2/3 -> cost = -(4/3)
  CHECK(cost(cf, make_trace('a', 'b'), ps) == doctest::Approx(-4.0 / 3.0));
  // a trace never seen in the sample costs nothing
  CHECK(cost(cf, make_trace('z', 'z'), ps) == 0.0);
  // ratios above 1 clamp to 1 per word
  auto tiny = std::make_shared<TraceStats>(
      collect_stats("ab", StatsMode::sliding));
  CostFunction clamped{CostKind::conditional_fp, tiny,
                       std::vector<std::uint64_t>{5, 5}};
  CHECK(cost(clamped, make_trace('a', 'b'), ps) == doctest::Approx(-2.0));
  CostFunction missing{CostKind::conditional_fp, stats, {}};
  CHECK_THROWS_AS(cost(missing, make_trace('a', 'b'), ps), MissingStats);
}
