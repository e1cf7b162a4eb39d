#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "b2/matcher.hpp"
#include "b2/optimizer.hpp"
#include "b2/pattern.hpp"

namespace b2 {

enum class Baseline { naive, ac };
enum class SolverChoice { exact, greedy };

struct BenchConfig {
  Baseline baseline = Baseline::ac;
  int repeat = 3;
  int threads = 1;  // >1 engages the parallel scan path
  SolverChoice solver = SolverChoice::greedy;
  std::chrono::milliseconds time_limit{30000};
};

struct VariantResult {
  std::string name;
  std::size_t motif_count = 0;
  double objective = 0.0;
  double throughput_mbit = 0.0;  // median over repeats
  std::uint64_t match_count = 0;
  std::uint64_t harvest_count = 0;
  std::uint64_t fast_path_probes = 0;
  double est_probability = 0.0;     // sum of motif probabilities from stats
  double actual_probability = 0.0;  // harvest / probes
  std::size_t memory_bytes = 0;
};

struct BenchOutcome {
  std::size_t bytes_consumed = 0;
  std::vector<VariantResult> variants;  // min, rare-strings, rare-input
  VariantResult baseline;               // throughput/memory/match_count only
};

/// Desk-scale throughput comparison: compiles the three cost variants
/// (rare-input uses stats over the first third of the input), times each
/// and the baseline over `repeat` runs, and reports median throughput plus
/// estimated vs. actual motif occurrence probability.
BenchOutcome bench_run(const PatternSet& ps, std::string_view input,
                       const BenchConfig& config = {});

std::string format_bench_table(const BenchOutcome& outcome);

}  // namespace b2
