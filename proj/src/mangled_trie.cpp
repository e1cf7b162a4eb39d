#include "b2/mangled_trie.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace b2 {

LiveSet initial_live_set(const ResolveSet& rs, const PatternSet& ps) {
  LiveSet live;
  for (std::size_t e = 0; e < rs.entries.size(); ++e) {
    const auto& entry = rs.entries[e];
    const std::string& w = ps.patterns[entry.pattern_id].bytes;
    LiveEntry le;
    le.entry = static_cast<int>(e);
    int lo = -static_cast<int>(entry.anchor);
    int hi = static_cast<int>(w.size()) - static_cast<int>(entry.anchor);
    for (int i = lo; i < hi; ++i) {
      if (i == 0 || i == 1) continue;
      le.symbols.emplace_back(
          i, static_cast<unsigned char>(
                 w[static_cast<std::size_t>(i + static_cast<int>(entry.anchor))]));
    }
    live.push_back(std::move(le));
  }
  return live;
}

namespace {

const unsigned char* symbol_at(const LiveEntry& le, int offset) {
  for (const auto& [o, b] : le.symbols)
    if (o == offset) return &b;
  return nullptr;
}

}  // namespace

PurgeResult purge_offset(const LiveSet& live, int scoring_offset,
                         std::optional<unsigned char> consumed) {
  PurgeResult out;
  for (const auto& le : live) {
    const unsigned char* b = symbol_at(le, scoring_offset);
    if (consumed) {
      if (b && *b != *consumed) continue;  // conflicting byte: purged
    } else {
      if (b) continue;  // fallback symbol conflicts with any requirement
    }
    LiveEntry survivor;
    survivor.entry = le.entry;
    for (const auto& s : le.symbols)
      if (s.first != scoring_offset) survivor.symbols.push_back(s);
    if (survivor.symbols.empty())
      out.completed.push_back(survivor.entry);
    else
      out.survivors.push_back(std::move(survivor));
  }
  return out;
}

std::optional<LiveSet> find_pivot(const LiveSet& live, int scoring_offset) {
  std::set<int> pos_entries, neg_entries;
  for (const auto& le : live)
    for (const auto& [o, b] : le.symbols) {
      if (o >= 2) pos_entries.insert(le.entry);
      if (o <= -1) neg_entries.insert(le.entry);
    }
  if (pos_entries.empty() || neg_entries.empty()) return std::nullopt;
  for (int e : pos_entries)
    if (neg_entries.count(e)) return std::nullopt;

  const std::set<int>& side = scoring_offset >= 2 ? neg_entries : pos_entries;
  LiveSet pivot;
  for (const auto& le : live)
    if (side.count(le.entry)) pivot.push_back(le);
  return pivot;
}

int calc_scoring_offset(const LiveSet& live) {
  std::set<int> offsets;
  for (const auto& le : live)
    for (const auto& [o, b] : le.symbols) offsets.insert(o);
  assert(!offsets.empty());

  int best_offset = 0;
  auto best_key = std::make_tuple(std::numeric_limits<std::size_t>::max(),
                                  std::numeric_limits<int>::max(), 1, 0);
  for (int o : offsets) {
    std::map<unsigned char, std::size_t> with_byte;
    std::size_t without = 0;
    for (const auto& le : live) {
      const unsigned char* b = symbol_at(le, o);
      if (b)
        ++with_byte[*b];
      else
        ++without;
    }
    // Worst surviving count over all branches: a byte branch keeps its own
    // class plus every epsilon entry; the fallback branch keeps only the
    // epsilon entries.
    std::size_t worst = without;
    for (const auto& [b, n] : with_byte) worst = std::max(worst, n + without);
    auto key = std::make_tuple(worst, std::abs(o), o >= 0 ? 1 : 0, o);
    if (key < best_key) {
      best_key = key;
      best_offset = o;
    }
  }
  return best_offset;
}

namespace {

std::vector<Fragment> to_fragments(
    const std::vector<std::pair<int, unsigned char>>& symbols) {
  std::vector<Fragment> out;
  for (const auto& [o, b] : symbols) {
    if (!out.empty() &&
        out.back().rel_offset + static_cast<int>(out.back().bytes.size()) == o)
      out.back().bytes.push_back(static_cast<char>(b));
    else
      out.push_back({o, std::string(1, static_cast<char>(b))});
  }
  return out;
}

class Builder {
 public:
  Builder(MangledTrie& mt, const ScoringFn& scoring)
      : mt_(mt), scoring_(scoring) {}

  // Returns a node index, or -1 for the empty subtrie.
  int build(const LiveSet& live) {
    if (live.empty()) return -1;
    if (live.size() == 1) {
      int n = new_node();
      mt_.nodes[n].terminal_entry = live[0].entry;
      mt_.nodes[n].fragments = to_fragments(live[0].symbols);
      return n;
    }

    int scoring_offset = scoring_(live);
    int state = new_node();
    mt_.nodes[state].scoring_offset = scoring_offset;

    std::set<unsigned char> branch_bytes;
    for (const auto& le : live)
      if (const unsigned char* b = symbol_at(le, scoring_offset))
        branch_bytes.insert(*b);
    assert(!branch_bytes.empty() &&
           "scoring offset must be present in the live set");

    for (unsigned char b : branch_bytes) {
      int child = build_branch(live, scoring_offset, b);
      mt_.nodes[state].edges.emplace_back(b, child);
    }
    mt_.nodes[state].fallback =
        build_branch(live, scoring_offset, std::nullopt);
    return state;
  }

 private:
  int build_branch(const LiveSet& live, int scoring_offset,
                   std::optional<unsigned char> consumed) {
    PurgeResult purged = purge_offset(live, scoring_offset, consumed);

    int child = -1;
    auto pivot_side = find_pivot(purged.survivors, scoring_offset);
    if (!pivot_side) {
      child = build(purged.survivors);
    } else {
      std::set<int> pivot_entries;
      for (const auto& le : *pivot_side) pivot_entries.insert(le.entry);
      LiveSet near_side;
      for (const auto& le : purged.survivors)
        if (!pivot_entries.count(le.entry)) near_side.push_back(le);
      child = build(near_side);
      int pivot = build(*pivot_side);
      if (child == -1) child = new_node();
      assert(mt_.nodes[child].pivot == -1);
      mt_.nodes[child].pivot = pivot;
    }

    if (!purged.completed.empty()) {
      if (child == -1) child = new_node();
      auto& m = mt_.nodes[child].matched;
      m.insert(m.end(), purged.completed.begin(), purged.completed.end());
      std::sort(m.begin(), m.end());
    }
    return child;
  }

  int new_node() {
    mt_.nodes.emplace_back();
    return static_cast<int>(mt_.nodes.size()) - 1;
  }

  MangledTrie& mt_;
  const ScoringFn& scoring_;
};

std::size_t node_depth(const MangledTrie& mt, int n,
                       std::vector<std::size_t>& memo) {
  if (n == -1) return 0;
  if (memo[n] != SIZE_MAX) return memo[n];
  const TrieNode& node = mt.nodes[n];
  std::size_t own = node.is_state() ? 1 : 0;
  for (const auto& f : node.fragments) own += f.bytes.size();
  std::size_t deepest = 0;
  for (const auto& [b, child] : node.edges)
    deepest = std::max(deepest, node_depth(mt, child, memo));
  deepest = std::max(deepest, node_depth(mt, node.fallback, memo));
  std::size_t total = own + deepest + node_depth(mt, node.pivot, memo);
  memo[n] = total;
  return total;
}

void compute_depth(MangledTrie& mt) {
  std::vector<std::size_t> memo(mt.nodes.size(), SIZE_MAX);
  mt.max_depth = mt.root == -1 ? 0 : node_depth(mt, mt.root, memo);
}

}  // namespace

MangledTrie build_mangled_trie(const ResolveSet& rs, const PatternSet& ps,
                               const BuildOptions& opts) {
  assert(!rs.entries.empty());
  MangledTrie mt;
  mt.motif = rs.motif;
  mt.entries = rs.entries;
  ScoringFn scoring = opts.scoring ? opts.scoring : calc_scoring_offset;
  Builder builder(mt, scoring);
  mt.root = builder.build(initial_live_set(rs, ps));
  if (opts.consolidate) mt = consolidate_nodes(mt);
  compute_depth(mt);
  return mt;
}

namespace {

struct Consolidator {
  const MangledTrie& src;
  MangledTrie& dst;
  std::map<std::string, int> canon;
  std::vector<int> remap;

  explicit Consolidator(const MangledTrie& s, MangledTrie& d)
      : src(s), dst(d), remap(s.nodes.size(), -2) {}

  int visit(int n) {
    if (n == -1) return -1;
    if (remap[n] != -2) return remap[n];
    const TrieNode& node = src.nodes[n];
    TrieNode copy = node;
    copy.edges.clear();
    for (const auto& [b, child] : node.edges)
      copy.edges.emplace_back(b, visit(child));
    copy.fallback = visit(node.fallback);
    copy.pivot = visit(node.pivot);

    std::ostringstream key;
    key << copy.scoring_offset << '|';
    for (const auto& [b, c] : copy.edges)
      key << static_cast<int>(b) << ':' << c << ',';
    key << '|' << copy.fallback << '|';
    for (int m : copy.matched) key << m << ',';
    key << '|' << copy.terminal_entry << '|';
    for (const auto& f : copy.fragments)
      key << f.rel_offset << ':' << f.bytes << ';';
    key << '|' << copy.pivot;

    auto [it, inserted] = canon.emplace(key.str(), -1);
    if (inserted) {
      dst.nodes.push_back(std::move(copy));
      it->second = static_cast<int>(dst.nodes.size()) - 1;
    }
    remap[n] = it->second;
    return it->second;
  }
};

}  // namespace

MangledTrie consolidate_nodes(const MangledTrie& mt) {
  MangledTrie out;
  out.motif = mt.motif;
  out.entries = mt.entries;
  out.max_depth = mt.max_depth;
  Consolidator c(mt, out);
  out.root = c.visit(mt.root);
  return out;
}

namespace {

std::string entry_label(const MangledTrie& mt, int e) {
  return "entry " + std::to_string(e) + " (pattern " +
         std::to_string(mt.entries[e].pattern_id) + " @" +
         std::to_string(mt.entries[e].anchor) + ")";
}

std::string byte_label(unsigned char b) {
  if (std::isprint(b)) return std::string(1, static_cast<char>(b));
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\x%02x", b);
  return buf;
}

void render_node(const MangledTrie& mt, int n, int indent,
                 std::ostringstream& out) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (n == -1) {
    out << pad << "(no match)\n";
    return;
  }
  const TrieNode& node = mt.nodes[n];
  out << pad << "node " << n;
  for (int m : node.matched) out << " [transitional: " << entry_label(mt, m) << "]";
  if (node.is_terminal()) {
    out << " [terminal: " << entry_label(mt, node.terminal_entry);
    for (const auto& f : node.fragments) {
      out << " \"";
      for (unsigned char b : f.bytes) out << byte_label(b);
      out << "\"@" << f.rel_offset;
    }
    out << "]";
  }
  if (node.is_state()) out << " [state @" << node.scoring_offset << "]";
  out << "\n";
  for (const auto& [b, child] : node.edges) {
    out << pad << "  '" << byte_label(b) << "' ->\n";
    render_node(mt, child, indent + 2, out);
  }
  if (node.is_state()) {
    out << pad << "  * ->\n";
    render_node(mt, node.fallback, indent + 2, out);
  }
  if (node.pivot != -1) {
    out << pad << "  pivot ->\n";
    render_node(mt, node.pivot, indent + 2, out);
  }
}

}  // namespace

std::string render_trie(const MangledTrie& mt) {
  std::ostringstream out;
  out << "mangled-trie for motif '" << trace_pretty(mt.motif) << "' ("
      << mt.nodes.size() << " nodes, depth " << mt.max_depth << ")\n";
  render_node(mt, mt.root, 0, out);
  return out.str();
}

std::string render_trie_graph(const MangledTrie& mt) {
  std::ostringstream out;
  for (std::size_t n = 0; n < mt.nodes.size(); ++n) {
    const TrieNode& node = mt.nodes[n];
    out << "node " << n;
    if (node.is_state()) out << " state " << node.scoring_offset;
    if (node.is_terminal()) out << " terminal " << node.terminal_entry;
    for (int m : node.matched) out << " transitional " << m;
    out << "\n";
    for (const auto& [b, child] : node.edges)
      out << "edge " << n << " " << child << " byte " << static_cast<int>(b)
          << "\n";
    if (node.fallback != -1) out << "edge " << n << " " << node.fallback
                                 << " fallback\n";
    if (node.pivot != -1) out << "edge " << n << " " << node.pivot
                              << " pivot\n";
  }
  out << "root " << mt.root << "\n";
  return out.str();
}

}  // namespace b2
