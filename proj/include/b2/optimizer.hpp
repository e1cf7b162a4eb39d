#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "b2/pattern.hpp"
#include "b2/stats.hpp"

namespace b2 {

/// One covering constraint: pattern `pattern_id` must be hit by a selected
/// trace at an offset of the given parity.
struct CoverageRow {
  std::size_t pattern_id;
  int parity;                      // 0 or 1
  std::vector<std::size_t> cols;   // indices into CoverageMatrix::columns
};

struct CoverageMatrix {
  std::vector<Trace> columns;            // ascending
  std::vector<CoverageRow> rows;         // 2 per unique pattern
  std::vector<std::vector<std::size_t>> col_rows;  // column -> row indices
};

CoverageMatrix build_coverage(const PatternSet& ps);

enum class SolverStatus { optimal, feasible_timeout, greedy };

struct MotifSet {
  std::vector<Trace> motifs;  // ascending
  double objective = 0.0;
  SolverStatus status = SolverStatus::greedy;

  bool contains(Trace t) const;
};

/// One line per incumbent improvement during the exact solve.
struct SolveLogEntry {
  double objective;
  std::uint64_t nodes;
  std::int64_t elapsed_ms;
};

/// Exact weighted set-multi-cover solve by depth-first branch-and-bound with
/// a greedy incumbent. Negative-cost columns are force-selected up front and
/// the final selection is pruned of motifs not needed for feasibility
/// (descending cost first). Deterministic for identical inputs.
MotifSet solve_exact(const CoverageMatrix& cm, const CostFunction& cf,
                     const PatternSet& ps,
                     std::chrono::milliseconds time_limit =
                         std::chrono::milliseconds(30000),
                     std::vector<SolveLogEntry>* log = nullptr);

/// Classic weighted set-cover greedy: repeatedly pick the trace minimizing
/// cost / newly-covered-rows. Always feasible.
MotifSet solve_greedy(const CoverageMatrix& cm, const CostFunction& cf,
                      const PatternSet& ps);

/// The always-feasible construction: first two bytes and bytes 1..2 of every
/// pattern.
MotifSet fallback_motifs(const PatternSet& ps);

/// True iff every pattern is covered at both parities by `ms`.
bool motif_set_feasible(const PatternSet& ps, const MotifSet& ms);

}  // namespace b2
