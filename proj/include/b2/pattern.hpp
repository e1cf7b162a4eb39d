#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace b2 {

// A trace is a 2-byte substring, packed big-endian: first byte in the high
// bits so ascending numeric order equals ascending byte order.
using Trace = std::uint16_t;

inline Trace make_trace(unsigned char a, unsigned char b) {
  return static_cast<Trace>((static_cast<unsigned>(a) << 8) | b);
}

inline Trace trace_at(std::string_view w, std::size_t i) {
  return make_trace(static_cast<unsigned char>(w[i]),
                    static_cast<unsigned char>(w[i + 1]));
}

inline unsigned char trace_first(Trace t) {
  return static_cast<unsigned char>(t >> 8);
}
inline unsigned char trace_second(Trace t) {
  return static_cast<unsigned char>(t & 0xff);
}

/// 4 lowercase hex digits, e.g. "6572" for "er".
std::string trace_hex(Trace t);

/// Inverse of trace_hex. Throws std::invalid_argument on malformed input.
Trace trace_from_hex(std::string_view hex);

/// Printable rendering: the two bytes if both printable, else hex.
std::string trace_pretty(Trace t);

struct Pattern {
  std::size_t id = 0;      // canonical index within the PatternSet
  std::string bytes;       // length >= 3

  // All original input indices that carried these bytes (id of the canonical
  // occurrence first). Match reports fan out to every source id.
  std::vector<std::size_t> source_ids;
};

struct PatternSet {
  std::vector<Pattern> patterns;
  // Byte sequence -> original input indices, for sequences supplied more
  // than once.
  std::map<std::string, std::vector<std::size_t>> duplicates;

  std::size_t total_bytes() const;   // sz(L), over canonical patterns
  std::size_t max_length() const;    // |w_max|, 0 when empty
};

struct EmptyPatternSet : std::runtime_error {
  EmptyPatternSet() : std::runtime_error("pattern set is empty") {}
};

struct PatternTooShort : std::runtime_error {
  std::size_t index;
  explicit PatternTooShort(std::size_t idx)
      : std::runtime_error("pattern at index " + std::to_string(idx) +
                           " is shorter than 3 bytes"),
        index(idx) {}
};

/// Validates raw byte sequences into a PatternSet. Sequences must be at
/// least 3 bytes; duplicates collapse to one canonical pattern with the
/// duplicate ids recorded.
PatternSet validate_patterns(const std::vector<std::string>& raw);

/// All 2-byte substrings of all patterns, ascending.
std::vector<Trace> extract_trace_set(const PatternSet& ps);

/// 1 iff w = prefix . t . suffix with |prefix| = l.
int occ(std::string_view w, Trace t, std::size_t l);

/// 1 iff t occurs in w at some offset congruent to parity mod 2.
int assoc(std::string_view w, Trace t, int parity);

/// Parses the line-oriented pattern file format: one pattern per line,
/// backslash escapes \xNN, \\, \n, \r, \t; blank lines and lines starting
/// with '#' are skipped. Returns decoded byte sequences in file order.
std::vector<std::string> parse_pattern_file_text(std::string_view text);

}  // namespace b2
