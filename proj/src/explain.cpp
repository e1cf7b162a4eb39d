#include "b2/explain.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace b2 {

namespace {

std::string display_byte(unsigned char b) {
  if (std::isprint(b)) return std::string(1, static_cast<char>(b));
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\x%02x", b);
  return buf;
}

}  // namespace

std::string render_resolve_set(const ResolveSet& rs, const PatternSet& ps) {
  std::ostringstream out;
  out << "R_" << trace_pretty(rs.motif) << " (" << rs.entries.size()
      << (rs.entries.size() == 1 ? " entry" : " entries") << "):\n";
  for (const auto& e : rs.entries) {
    const std::string& w = ps.patterns[e.pattern_id].bytes;
    std::string line = "  ";
    std::size_t caret_begin = 0, caret_end = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i == e.anchor) caret_begin = line.size();
      line += display_byte(static_cast<unsigned char>(w[i]));
      if (i == e.anchor + 1) caret_end = line.size();
    }
    out << line << "\n";
    out << std::string(caret_begin, ' ')
        << std::string(caret_end - caret_begin, '^') << "\n";
  }
  return out.str();
}

std::string explain_artifact(const CompiledMatcher& cm, int only_motif) {
  std::ostringstream out;
  for (const auto& mt : cm.tries) {
    if (only_motif >= 0 && mt.motif != static_cast<Trace>(only_motif))
      continue;
    ResolveSet rs;
    rs.motif = mt.motif;
    rs.entries = mt.entries;
    out << render_resolve_set(rs, cm.patterns);
    out << render_trie(mt);
    out << "\n";
  }
  return out.str();
}

}  // namespace b2
