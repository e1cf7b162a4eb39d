#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "b2/assign.hpp"
#include "b2/pattern.hpp"

namespace b2 {

/// A contiguous byte run still to verify, at an offset relative to the
/// motif anchor.
struct Fragment {
  int rel_offset;
  std::string bytes;

  bool operator==(const Fragment&) const = default;
};

/// One mangled-trie node. A node may combine roles: it can record
/// transitional matches and still branch as a state, or verify a terminal
/// fragment and then proceed to a pivot.
struct TrieNode {
  int scoring_offset = 0;                          // meaningful iff is_state()
  std::vector<std::pair<unsigned char, int>> edges;  // sorted by byte
  int fallback = -1;        // child for "any other symbol"; -1 = no match
  std::vector<int> matched;  // entries completed by the incoming transition
  int terminal_entry = -1;   // sole surviving entry, verified via fragments
  std::vector<Fragment> fragments;
  int pivot = -1;            // deferred subtrie on the far side of the motif

  bool is_state() const { return !edges.empty(); }
  bool is_terminal() const { return terminal_entry >= 0; }
  bool is_transitional() const { return !matched.empty(); }
};

struct MangledTrie {
  Trace motif = 0;
  std::vector<ResolveEntry> entries;
  std::vector<TrieNode> nodes;
  int root = -1;
  std::size_t max_depth = 0;  // worst-case symbol examinations per walk

  std::size_t node_count() const { return nodes.size(); }
};

/// A live resolve-set entry mid-construction: the entry index plus its
/// remaining (relative offset, byte) symbols, sorted by offset.
struct LiveEntry {
  int entry;
  std::vector<std::pair<int, unsigned char>> symbols;
};
using LiveSet = std::vector<LiveEntry>;

/// The full symbol set of a resolve-set: every offset in the entry's window
/// except the motif bytes at 0 and 1.
LiveSet initial_live_set(const ResolveSet& rs, const PatternSet& ps);

struct PurgeResult {
  LiveSet survivors;
  std::vector<int> completed;  // entries left with no symbols (transitional)
};

/// Consuming `consumed` at `scoring_offset` discards every entry whose byte
/// there conflicts (nullopt = the fallback symbol, conflicting with any
/// concrete requirement) and drops the offset from the survivors.
PurgeResult purge_offset(const LiveSet& live, int scoring_offset,
                         std::optional<unsigned char> consumed);

/// When the entries owning symbols at offsets >= 2 and those at offsets
/// <= -1 are nonempty and disjoint, returns the side opposite the scoring
/// offset; empty otherwise.
std::optional<LiveSet> find_pivot(const LiveSet& live, int scoring_offset);

/// Default scoring heuristic: the offset minimizing the worst-case
/// surviving-entry count over its branches; ties broken by smaller
/// |offset|, negative side first.
int calc_scoring_offset(const LiveSet& live);

using ScoringFn = std::function<int(const LiveSet&)>;

struct BuildOptions {
  ScoringFn scoring;          // defaults to calc_scoring_offset
  bool consolidate = true;
};

MangledTrie build_mangled_trie(const ResolveSet& rs, const PatternSet& ps,
                               const BuildOptions& opts = {});

/// Shares structurally identical subtries (the trie becomes a DAG).
/// Resolution behavior is unchanged; node count never grows.
MangledTrie consolidate_nodes(const MangledTrie& mt);

/// Renders the trie as indented text for the explain command.
std::string render_trie(const MangledTrie& mt);

/// One node/edge per line, for external graph tooling.
std::string render_trie_graph(const MangledTrie& mt);

}  // namespace b2
