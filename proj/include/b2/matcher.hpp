#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "b2/assign.hpp"
#include "b2/mangled_trie.hpp"
#include "b2/pattern.hpp"

namespace b2 {

struct HarvestEntry {
  std::size_t input_offset;  // even
  Trace motif;

  bool operator==(const HarvestEntry&) const = default;
};

struct MatchReport {
  std::size_t pattern_id;  // original input index (duplicates fanned out)
  std::size_t start;
  std::size_t end;         // start + |w|

  auto operator<=>(const MatchReport&) const = default;
};

struct MatchCounters {
  std::uint64_t fast_path_probes = 0;
  std::uint64_t harvest_count = 0;
  std::uint64_t slow_path_node_visits = 0;
  std::uint64_t fragment_bytes_compared = 0;
};

struct InconsistentPlan : std::runtime_error {
  explicit InconsistentPlan(const std::string& what)
      : std::runtime_error(what) {}
};

struct ArtifactError : std::runtime_error {
  explicit ArtifactError(const std::string& what) : std::runtime_error(what) {}
};

/// The immutable compiled artifact: fast-path dispatch table, all mangled
/// tries, and pattern metadata. Freely shareable across threads.
struct CompiledMatcher {
  std::vector<std::int32_t> dispatch;  // 65536 entries, -1 = not a motif
  std::vector<MangledTrie> tries;      // ordered by motif
  std::vector<Mapping> mappings;
  PatternSet patterns;

  const MangledTrie* trie_for(Trace t) const {
    std::int32_t idx = dispatch[t];
    return idx < 0 ? nullptr : &tries[static_cast<std::size_t>(idx)];
  }
};

CompiledMatcher compile(const PatternSet& ps, const AssignmentPlan& plan,
                        const BuildOptions& trie_opts = {});

/// Every (even offset, motif) hit, ascending offset. Consumers must not
/// rely on the order.
std::vector<HarvestEntry> fast_path(const CompiledMatcher& cm,
                                    std::string_view input,
                                    MatchCounters* counters = nullptr);

/// Resolves each harvest entry through its mangled trie. Reports are
/// deduplicated by (pattern, start) and fanned out to duplicate ids.
std::vector<MatchReport> slow_path(const CompiledMatcher& cm,
                                   const std::vector<HarvestEntry>& harvest,
                                   std::string_view input,
                                   MatchCounters* counters = nullptr);

/// Fast path then slow path over the whole input. Reports sorted by
/// (start, pattern).
std::vector<MatchReport> match(const CompiledMatcher& cm,
                               std::string_view input,
                               MatchCounters* counters = nullptr);

/// Same report multiset as match(), computed over even-aligned input chunks
/// in parallel (OpenMP when available).
std::vector<MatchReport> match_parallel(const CompiledMatcher& cm,
                                        std::string_view input, int threads,
                                        MatchCounters* counters = nullptr);

struct MemoryReport {
  std::size_t dispatch_bytes = 0;
  std::size_t trie_node_bytes = 0;
  std::size_t trie_fragment_bytes = 0;
  std::size_t trie_entry_bytes = 0;
  std::size_t pattern_bytes = 0;
  std::size_t total() const {
    return dispatch_bytes + trie_node_bytes + trie_fragment_bytes +
           trie_entry_bytes + pattern_bytes;
  }
};

MemoryReport memory_report(const CompiledMatcher& cm);

/// Little-endian binary container: magic "B2C1", version, section table.
/// Deterministic: serialize(deserialize(x)) == x.
std::string serialize(const CompiledMatcher& cm);
CompiledMatcher deserialize(std::string_view data);

}  // namespace b2
