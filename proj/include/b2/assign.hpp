#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "b2/optimizer.hpp"
#include "b2/pattern.hpp"
#include "b2/stats.hpp"

namespace b2 {

struct Mapping {
  std::size_t pattern_id;
  int parity;        // 0 or 1
  Trace motif;
  std::size_t anchor;  // offset of the motif within the pattern
};

struct ResolveEntry {
  std::size_t pattern_id;
  std::size_t anchor;
};

struct ResolveSet {
  Trace motif;
  std::vector<ResolveEntry> entries;
};

struct InfeasibleMotifSet : std::runtime_error {
  InfeasibleMotifSet(std::size_t pattern_id, int parity)
      : std::runtime_error("pattern " + std::to_string(pattern_id) +
                           " has no motif at parity " +
                           std::to_string(parity)) {}
};

/// Controls the last-resort tie-break between equally ranked candidate
/// (motif, anchor) pairs. `centered` prefers anchors near the middle of the
/// word (shallower tries); `leftmost` prefers the smallest anchor.
enum class AnchorTieBreak { centered, leftmost };

struct AssignConfig {
  const CostFunction* cost_fn = nullptr;  // optional; unit cost when absent
  AnchorTieBreak tie_break = AnchorTieBreak::centered;
};

struct AssignmentPlan {
  std::vector<Mapping> mappings;            // 2 per unique pattern
  std::map<Trace, ResolveSet> resolve_sets; // motifs with entries only
};

/// Picks exactly one even-parity and one odd-parity (motif, anchor) mapping
/// per unique pattern and materializes the per-motif resolve-sets. Motifs
/// that end up with no entries are dropped.
AssignmentPlan assign_mappings(const PatternSet& ps, const MotifSet& ms,
                               const AssignConfig& config = {});

}  // namespace b2
