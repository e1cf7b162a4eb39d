#include "b2/pattern.hpp"

#include <algorithm>
#include <cctype>

namespace b2 {

std::string trace_hex(Trace t) {
  static const char* digits = "0123456789abcdef";
  std::string s(4, '0');
  s[0] = digits[(t >> 12) & 0xf];
  s[1] = digits[(t >> 8) & 0xf];
  s[2] = digits[(t >> 4) & 0xf];
  s[3] = digits[t & 0xf];
  return s;
}

Trace trace_from_hex(std::string_view hex) {
  if (hex.size() != 4)
    throw std::invalid_argument("trace hex must be 4 digits");
  unsigned v = 0;
  for (char c : hex) {
    v <<= 4;
    if (c >= '0' && c <= '9')
      v |= static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      v |= static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      v |= static_cast<unsigned>(c - 'A' + 10);
    else
      throw std::invalid_argument("trace hex has non-hex digit");
  }
  return static_cast<Trace>(v);
}

std::string trace_pretty(Trace t) {
  unsigned char a = trace_first(t), b = trace_second(t);
  if (std::isprint(a) && std::isprint(b))
    return std::string(1, static_cast<char>(a)) + static_cast<char>(b);
  return "0x" + trace_hex(t);
}

std::size_t PatternSet::total_bytes() const {
  std::size_t n = 0;
  for (const auto& p : patterns) n += p.bytes.size();
  return n;
}

std::size_t PatternSet::max_length() const {
  std::size_t m = 0;
  for (const auto& p : patterns) m = std::max(m, p.bytes.size());
  return m;
}

PatternSet validate_patterns(const std::vector<std::string>& raw) {
  if (raw.empty()) throw EmptyPatternSet();
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i].size() < 3) throw PatternTooShort(i);

  PatternSet ps;
  std::map<std::string, std::size_t> canonical;  // bytes -> canonical id
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto it = canonical.find(raw[i]);
    if (it == canonical.end()) {
      Pattern p;
      p.id = ps.patterns.size();
      p.bytes = raw[i];
      p.source_ids.push_back(i);
      canonical.emplace(raw[i], p.id);
      ps.patterns.push_back(std::move(p));
    } else {
      ps.patterns[it->second].source_ids.push_back(i);
    }
  }
  for (const auto& p : ps.patterns)
    if (p.source_ids.size() > 1) ps.duplicates[p.bytes] = p.source_ids;
  return ps;
}

std::vector<Trace> extract_trace_set(const PatternSet& ps) {
  std::vector<bool> seen(65536, false);
  for (const auto& p : ps.patterns)
    for (std::size_t i = 0; i + 1 < p.bytes.size(); ++i)
      seen[trace_at(p.bytes, i)] = true;
  std::vector<Trace> out;
  for (unsigned v = 0; v < 65536; ++v)
    if (seen[v]) out.push_back(static_cast<Trace>(v));
  return out;
}

int occ(std::string_view w, Trace t, std::size_t l) {
  if (l + 2 > w.size()) return 0;
  return trace_at(w, l) == t ? 1 : 0;
}

int assoc(std::string_view w, Trace t, int parity) {
  for (std::size_t l = static_cast<std::size_t>(parity); l + 1 < w.size();
       l += 2)
    if (trace_at(w, l) == t) return 1;
  return 0;
}

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string decode_pattern_line(std::string_view line, std::size_t lineno) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 1 >= line.size())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": dangling backslash");
    char e = line[++i];
    switch (e) {
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'x': {
        if (i + 2 >= line.size())
          throw std::invalid_argument("line " + std::to_string(lineno) +
                                      ": truncated \\x escape");
        int hi = hex_digit(line[i + 1]);
        int lo = hex_digit(line[i + 2]);
        if (hi < 0 || lo < 0)
          throw std::invalid_argument("line " + std::to_string(lineno) +
                                      ": bad \\x escape");
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        break;
      }
      default:
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": unknown escape \\" + std::string(1, e));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> parse_pattern_file_text(std::string_view text) {
  std::vector<std::string> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#')
      out.push_back(decode_pattern_line(line, lineno));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace b2
