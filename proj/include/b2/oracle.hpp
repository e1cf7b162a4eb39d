#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "b2/matcher.hpp"
#include "b2/pattern.hpp"

namespace b2 {

/// Ground-truth matcher: direct comparison at every offset, first-byte
/// bucketed. Reports the same (pattern, start) multiset contract as the
/// compiled matcher, duplicates fanned out.
class NaiveMatcher {
 public:
  explicit NaiveMatcher(const PatternSet& ps);
  std::vector<MatchReport> match(std::string_view input) const;

 private:
  PatternSet ps_;
  std::array<std::vector<std::size_t>, 256> by_first_byte_;
};

std::vector<MatchReport> naive_match(const PatternSet& ps,
                                     std::string_view input);

/// Textbook Aho-Corasick automaton with failure links (not Snort's variant):
/// sparse per-node transitions, failure chain walked on miss. Used as the
/// correctness cross-check and the throughput/memory baseline.
class ACMatcher {
 public:
  explicit ACMatcher(const PatternSet& ps);
  std::vector<MatchReport> match(std::string_view input) const;
  std::size_t memory_bytes() const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::int32_t>> next;  // sorted
    std::int32_t fail = 0;
    std::vector<std::uint32_t> outputs;  // canonical pattern ids ending here
  };
  std::int32_t step(std::int32_t state, unsigned char b) const;

  PatternSet ps_;
  std::vector<Node> nodes_;
};

std::vector<MatchReport> ac_match(const PatternSet& ps,
                                  std::string_view input);

}  // namespace b2
