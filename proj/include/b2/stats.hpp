#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "b2/pattern.hpp"

namespace b2 {

enum class StatsMode { even_aligned, sliding };

struct ZeroPairStats : std::runtime_error {
  ZeroPairStats() : std::runtime_error("stats collected over zero pairs") {}
};

struct MissingStats : std::runtime_error {
  MissingStats()
      : std::runtime_error("cost function requires trace statistics") {}
};

/// 2-gram occurrence counts over a sample corpus. Immutable once collected;
/// merge() adds counts from a second pass over another stream.
struct TraceStats {
  StatsMode mode = StatsMode::even_aligned;
  std::uint64_t total_pairs = 0;
  std::vector<std::uint64_t> counts;  // 65536 entries

  TraceStats() : counts(65536, 0) {}

  double probability(Trace t) const {
    if (total_pairs == 0) throw ZeroPairStats();
    return static_cast<double>(counts[t]) / static_cast<double>(total_pairs);
  }

  void merge(const TraceStats& other);
};

/// even_aligned counts pairs at even offsets i with i+1 < n (the fast-path
/// view of the input); sliding counts all n-1 overlapping pairs.
TraceStats collect_stats(std::string_view input, StatsMode mode);

/// Versioned JSON stats file, deterministic key order.
std::string stats_to_json(const TraceStats& s);
TraceStats stats_from_json(std::string_view json_text);

enum class CostKind { unit, rare_in_strings, rare_in_input, conditional_fp };

struct CostFunction {
  CostKind kind = CostKind::unit;
  std::shared_ptr<const TraceStats> stats;  // rare_in_input / conditional_fp
  // Sliding-window occurrence count of each canonical pattern in the stats
  // sample; required for conditional_fp.
  std::vector<std::uint64_t> word_counts;
};

/// Sliding-window occurrence counts of every canonical pattern over a
/// sample, for conditional_fp cost estimation.
std::vector<std::uint64_t> count_words(const PatternSet& ps,
                                       std::string_view sample);

double cost(const CostFunction& cf, Trace t, const PatternSet& ps);

}  // namespace b2
