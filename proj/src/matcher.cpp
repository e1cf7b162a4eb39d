#include "b2/matcher.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace b2 {

CompiledMatcher compile(const PatternSet& ps, const AssignmentPlan& plan,
                        const BuildOptions& trie_opts) {
  CompiledMatcher cm;
  cm.patterns = ps;
  cm.mappings = plan.mappings;
  cm.dispatch.assign(65536, -1);
  for (const auto& [motif, rs] : plan.resolve_sets) {
    if (rs.entries.empty()) continue;
    cm.dispatch[motif] = static_cast<std::int32_t>(cm.tries.size());
    cm.tries.push_back(build_mangled_trie(rs, ps, trie_opts));
  }
  for (const auto& m : plan.mappings)
    if (cm.dispatch[m.motif] < 0)
      throw InconsistentPlan("mapping for pattern " +
                             std::to_string(m.pattern_id) +
                             " references motif without a trie");
  return cm;
}

namespace {

void fast_path_range(const CompiledMatcher& cm, std::string_view input,
                     std::size_t lo, std::size_t hi,
                     std::vector<HarvestEntry>& out, MatchCounters* counters) {
  for (std::size_t i = lo; i < hi && i + 1 < input.size(); i += 2) {
    if (counters) ++counters->fast_path_probes;
    Trace t = trace_at(input, i);
    if (cm.dispatch[t] >= 0) out.push_back({i, t});
  }
}

void emit(const MangledTrie& mt, int entry, std::size_t i,
          std::vector<std::pair<std::size_t, std::size_t>>& raw) {
  const ResolveEntry& re = mt.entries[static_cast<std::size_t>(entry)];
  assert(i >= re.anchor);
  raw.emplace_back(re.pattern_id, i - re.anchor);
}

// Walks one mangled trie for a single harvest hit. The pivot subtrie, when
// one was recorded along the path, is walked after the primary path ends.
void walk(const MangledTrie& mt, std::size_t i,
          std::string_view input,
          std::vector<std::pair<std::size_t, std::size_t>>& raw,
          MatchCounters* counters) {
  int pivot_pending = -1;
  int n = mt.root;
  for (;;) {
    while (n != -1) {
      const TrieNode& node = mt.nodes[static_cast<std::size_t>(n)];
      for (int m : node.matched) emit(mt, m, i, raw);
      if (node.pivot != -1) {
        assert(pivot_pending == -1 && "at most one pivot per path");
        pivot_pending = node.pivot;
      }
      if (node.is_terminal()) {
        bool ok = true;
        for (const auto& f : node.fragments) {
          std::int64_t pos = static_cast<std::int64_t>(i) + f.rel_offset;
          if (pos < 0 || static_cast<std::size_t>(pos) + f.bytes.size() >
                             input.size()) {
            ok = false;
            break;
          }
          bool equal = input.compare(static_cast<std::size_t>(pos),
                                     f.bytes.size(), f.bytes) == 0;
          if (counters) counters->fragment_bytes_compared += f.bytes.size();
          if (!equal) {
            ok = false;
            break;
          }
        }
        if (ok) emit(mt, node.terminal_entry, i, raw);
      }
      if (!node.is_state()) break;
      if (counters) ++counters->slow_path_node_visits;
      std::int64_t pos = static_cast<std::int64_t>(i) + node.scoring_offset;
      if (pos < 0 || static_cast<std::size_t>(pos) >= input.size()) {
        n = node.fallback;  // a missing byte never equals a required one
        continue;
      }
      unsigned char byte =
          static_cast<unsigned char>(input[static_cast<std::size_t>(pos)]);
      auto it = std::lower_bound(
          node.edges.begin(), node.edges.end(), byte,
          [](const auto& e, unsigned char b) { return e.first < b; });
      n = (it != node.edges.end() && it->first == byte) ? it->second
                                                        : node.fallback;
    }
    if (pivot_pending == -1) break;
    n = pivot_pending;
    pivot_pending = -1;
  }
}

std::vector<MatchReport> finalize_reports(
    const CompiledMatcher& cm,
    std::vector<std::pair<std::size_t, std::size_t>>& raw) {
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  std::vector<MatchReport> out;
  for (const auto& [pid, start] : raw) {
    const Pattern& p = cm.patterns.patterns[pid];
    for (std::size_t sid : p.source_ids)
      out.push_back({sid, start, start + p.bytes.size()});
  }
  std::sort(out.begin(), out.end(),
            [](const MatchReport& a, const MatchReport& b) {
              return std::tie(a.start, a.pattern_id) <
                     std::tie(b.start, b.pattern_id);
            });
  return out;
}

}  // namespace

std::vector<HarvestEntry> fast_path(const CompiledMatcher& cm,
                                    std::string_view input,
                                    MatchCounters* counters) {
  std::vector<HarvestEntry> out;
  fast_path_range(cm, input, 0, input.size(), out, counters);
  if (counters) counters->harvest_count += out.size();
  return out;
}

std::vector<MatchReport> slow_path(const CompiledMatcher& cm,
                                   const std::vector<HarvestEntry>& harvest,
                                   std::string_view input,
                                   MatchCounters* counters) {
  std::vector<std::pair<std::size_t, std::size_t>> raw;
  for (const auto& h : harvest) {
    const MangledTrie* mt = cm.trie_for(h.motif);
    assert(mt != nullptr);
    walk(*mt, h.input_offset, input, raw, counters);
  }
  return finalize_reports(cm, raw);
}

std::vector<MatchReport> match(const CompiledMatcher& cm,
                               std::string_view input,
                               MatchCounters* counters) {
  auto harvest = fast_path(cm, input, counters);
  return slow_path(cm, harvest, input, counters);
}

std::vector<MatchReport> match_parallel(const CompiledMatcher& cm,
                                        std::string_view input, int threads,
                                        MatchCounters* counters) {
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  if (threads <= 0) threads = 1;
#endif
  std::size_t n = input.size();
  std::size_t chunk = (n / static_cast<std::size_t>(threads) + 2) & ~std::size_t{1};
  if (chunk == 0) chunk = 2;
  std::size_t nchunks = (n + chunk - 1) / chunk;
  if (nchunks == 0) nchunks = 1;

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> raws(nchunks);
  std::vector<MatchCounters> local(nchunks);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::size_t c = 0; c < nchunks; ++c) {
    std::size_t lo = c * chunk;
    std::size_t hi = std::min(lo + chunk, n);
    std::vector<HarvestEntry> harvest;
    MatchCounters* lc = counters ? &local[c] : nullptr;
    fast_path_range(cm, input, lo, hi, harvest, lc);
    if (lc) lc->harvest_count += harvest.size();
    for (const auto& h : harvest) {
      const MangledTrie* mt = cm.trie_for(h.motif);
      walk(*mt, h.input_offset, input, raws[c], lc);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> raw;
  for (auto& r : raws) raw.insert(raw.end(), r.begin(), r.end());
  if (counters)
    for (const auto& lc : local) {
      counters->fast_path_probes += lc.fast_path_probes;
      counters->harvest_count += lc.harvest_count;
      counters->slow_path_node_visits += lc.slow_path_node_visits;
      counters->fragment_bytes_compared += lc.fragment_bytes_compared;
    }
  return finalize_reports(cm, raw);
}

MemoryReport memory_report(const CompiledMatcher& cm) {
  MemoryReport r;
  r.dispatch_bytes = cm.dispatch.size() * sizeof(std::int32_t);
  for (const auto& mt : cm.tries) {
    for (const auto& node : mt.nodes) {
      r.trie_node_bytes += sizeof(TrieNode);
      r.trie_node_bytes +=
          node.edges.size() * sizeof(std::pair<unsigned char, int>);
      r.trie_node_bytes += node.matched.size() * sizeof(int);
      for (const auto& f : node.fragments) {
        r.trie_fragment_bytes += sizeof(Fragment) + f.bytes.size();
      }
    }
    r.trie_entry_bytes += mt.entries.size() * sizeof(ResolveEntry);
  }
  for (const auto& p : cm.patterns.patterns) {
    r.pattern_bytes += p.bytes.size() + sizeof(Pattern);
    r.pattern_bytes += p.source_ids.size() * sizeof(std::size_t);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'B', '2', 'C', '1'};
constexpr std::uint16_t kVersion = 1;
enum SectionId : std::uint16_t {
  kPatterns = 1,
  kMotifs = 2,
  kMappings = 3,
  kTries = 4,
};

struct Writer {
  std::string buf;
  void u8(std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v));
    u16(static_cast<std::uint16_t>(v >> 16));
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v));
    u32(static_cast<std::uint32_t>(v >> 32));
  }
  void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) { buf.append(s); }
};

struct Reader {
  std::string_view buf;
  std::size_t pos = 0;
  std::uint8_t u8() {
    if (pos >= buf.size())
      throw ArtifactError("truncated artifact at offset " +
                          std::to_string(pos));
    return static_cast<std::uint8_t>(buf[pos++]);
  }
  std::uint16_t u16() {
    std::uint16_t lo = u8(), hi = u8();
    return static_cast<std::uint16_t>(lo | (hi << 8));
  }
  std::uint32_t u32() {
    std::uint32_t lo = u16(), hi = u16();
    return lo | (hi << 16);
  }
  std::uint64_t u64() {
    std::uint64_t lo = u32(), hi = u32();
    return lo | (hi << 32);
  }
  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::string bytes(std::size_t n) {
    if (pos + n > buf.size())
      throw ArtifactError("truncated artifact at offset " +
                          std::to_string(pos));
    std::string s(buf.substr(pos, n));
    pos += n;
    return s;
  }
};

void write_patterns(Writer& w, const PatternSet& ps) {
  w.u32(static_cast<std::uint32_t>(ps.patterns.size()));
  for (const auto& p : ps.patterns) {
    w.u32(static_cast<std::uint32_t>(p.bytes.size()));
    w.bytes(p.bytes);
    w.u32(static_cast<std::uint32_t>(p.source_ids.size()));
    for (std::size_t sid : p.source_ids) w.u64(sid);
  }
}

PatternSet read_patterns(Reader& r) {
  PatternSet ps;
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    Pattern p;
    p.id = i;
    p.bytes = r.bytes(r.u32());
    std::uint32_t ns = r.u32();
    for (std::uint32_t s = 0; s < ns; ++s) p.source_ids.push_back(r.u64());
    if (p.source_ids.size() > 1) ps.duplicates[p.bytes] = p.source_ids;
    ps.patterns.push_back(std::move(p));
  }
  return ps;
}

void write_tries(Writer& w, const std::vector<MangledTrie>& tries) {
  w.u32(static_cast<std::uint32_t>(tries.size()));
  for (const auto& mt : tries) {
    w.u16(mt.motif);
    w.u32(static_cast<std::uint32_t>(mt.entries.size()));
    for (const auto& e : mt.entries) {
      w.u32(static_cast<std::uint32_t>(e.pattern_id));
      w.u16(static_cast<std::uint16_t>(e.anchor));
    }
    w.i32(mt.root);
    w.u64(mt.max_depth);
    w.u32(static_cast<std::uint32_t>(mt.nodes.size()));
    for (const auto& node : mt.nodes) {
      w.i16(static_cast<std::int16_t>(node.scoring_offset));
      w.u16(static_cast<std::uint16_t>(node.edges.size()));
      for (const auto& [b, child] : node.edges) {
        w.u8(b);
        w.i32(child);
      }
      w.i32(node.fallback);
      w.u16(static_cast<std::uint16_t>(node.matched.size()));
      for (int m : node.matched) w.i32(m);
      w.i32(node.terminal_entry);
      w.u16(static_cast<std::uint16_t>(node.fragments.size()));
      for (const auto& f : node.fragments) {
        w.i16(static_cast<std::int16_t>(f.rel_offset));
        w.u16(static_cast<std::uint16_t>(f.bytes.size()));
        w.bytes(f.bytes);
      }
      w.i32(node.pivot);
    }
  }
}

std::vector<MangledTrie> read_tries(Reader& r) {
  std::vector<MangledTrie> tries;
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    MangledTrie mt;
    mt.motif = r.u16();
    std::uint32_t ne = r.u32();
    for (std::uint32_t e = 0; e < ne; ++e) {
      ResolveEntry re;
      re.pattern_id = r.u32();
      re.anchor = r.u16();
      mt.entries.push_back(re);
    }
    mt.root = r.i32();
    mt.max_depth = r.u64();
    std::uint32_t nn = r.u32();
    for (std::uint32_t k = 0; k < nn; ++k) {
      TrieNode node;
      node.scoring_offset = r.i16();
      std::uint16_t nedges = r.u16();
      for (std::uint16_t e = 0; e < nedges; ++e) {
        unsigned char b = r.u8();
        node.edges.emplace_back(b, r.i32());
      }
      node.fallback = r.i32();
      std::uint16_t nm = r.u16();
      for (std::uint16_t m = 0; m < nm; ++m)
        node.matched.push_back(r.i32());
      node.terminal_entry = r.i32();
      std::uint16_t nf = r.u16();
      for (std::uint16_t f = 0; f < nf; ++f) {
        Fragment frag;
        frag.rel_offset = r.i16();
        frag.bytes = r.bytes(r.u16());
        node.fragments.push_back(std::move(frag));
      }
      node.pivot = r.i32();
      mt.nodes.push_back(std::move(node));
    }
    tries.push_back(std::move(mt));
  }
  return tries;
}

}  // namespace

std::string serialize(const CompiledMatcher& cm) {
  Writer out;
  out.bytes(std::string_view(kMagic, 4));
  out.u16(kVersion);

  auto section = [&out](std::uint16_t id, const std::string& payload) {
    out.u16(id);
    out.u64(payload.size());
    out.bytes(payload);
  };
  out.u16(4);  // section count

  {
    Writer w;
    write_patterns(w, cm.patterns);
    section(kPatterns, w.buf);
  }
  {
    Writer w;
    std::vector<Trace> motifs;
    for (const auto& mt : cm.tries) motifs.push_back(mt.motif);
    w.u32(static_cast<std::uint32_t>(motifs.size()));
    for (Trace t : motifs) w.u16(t);
    section(kMotifs, w.buf);
  }
  {
    Writer w;
    w.u32(static_cast<std::uint32_t>(cm.mappings.size()));
    for (const auto& m : cm.mappings) {
      w.u32(static_cast<std::uint32_t>(m.pattern_id));
      w.u8(static_cast<std::uint8_t>(m.parity));
      w.u16(m.motif);
      w.u16(static_cast<std::uint16_t>(m.anchor));
    }
    section(kMappings, w.buf);
  }
  {
    Writer w;
    write_tries(w, cm.tries);
    section(kTries, w.buf);
  }
  return std::move(out.buf);
}

CompiledMatcher deserialize(std::string_view data) {
  Reader r{data};
  std::string magic = r.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw ArtifactError("bad magic at offset 0");
  std::uint16_t version = r.u16();
  if (version != kVersion)
    throw ArtifactError("unsupported artifact version " +
                        std::to_string(version));

  CompiledMatcher cm;
  cm.dispatch.assign(65536, -1);
  std::uint16_t sections = r.u16();
  for (std::uint16_t s = 0; s < sections; ++s) {
    std::size_t header_at = r.pos;
    std::uint16_t id = r.u16();
    std::uint64_t len = r.u64();
    std::size_t end = r.pos + len;
    if (end > data.size())
      throw ArtifactError("section length overruns file at offset " +
                          std::to_string(header_at));
    switch (id) {
      case kPatterns:
        cm.patterns = read_patterns(r);
        break;
      case kMotifs: {
        std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) r.u16();
        break;
      }
      case kMappings: {
        std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
          Mapping m;
          m.pattern_id = r.u32();
          m.parity = r.u8();
          m.motif = r.u16();
          m.anchor = r.u16();
          cm.mappings.push_back(m);
        }
        break;
      }
      case kTries:
        cm.tries = read_tries(r);
        break;
      default:
        throw ArtifactError("unknown section id " + std::to_string(id) +
                            " at offset " + std::to_string(header_at));
    }
    if (r.pos != end)
      throw ArtifactError("section " + std::to_string(id) +
                          " has inconsistent length");
  }
  if (r.pos != data.size())
    throw ArtifactError("trailing bytes after the last section");
  for (std::size_t i = 0; i < cm.tries.size(); ++i)
    cm.dispatch[cm.tries[i].motif] = static_cast<std::int32_t>(i);
  for (const auto& m : cm.mappings)
    if (cm.dispatch[m.motif] < 0)
      throw ArtifactError("mapping references motif without a trie");
  return cm;
}

}  // namespace b2
