#include "b2/stats.hpp"

#include <algorithm>

#include <json.hpp>

namespace b2 {

void TraceStats::merge(const TraceStats& other) {
  if (other.mode != mode)
    throw std::invalid_argument("cannot merge stats with different modes");
  total_pairs += other.total_pairs;
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

TraceStats collect_stats(std::string_view input, StatsMode mode) {
  TraceStats s;
  s.mode = mode;
  std::size_t step = mode == StatsMode::even_aligned ? 2 : 1;
  for (std::size_t i = 0; i + 1 < input.size(); i += step) {
    ++s.counts[trace_at(input, i)];
    ++s.total_pairs;
  }
  return s;
}

std::string stats_to_json(const TraceStats& s) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["mode"] = s.mode == StatsMode::even_aligned ? "even_aligned" : "sliding";
  j["total_pairs"] = s.total_pairs;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (unsigned v = 0; v < 65536; ++v)
    if (s.counts[v] != 0)
      counts[trace_hex(static_cast<Trace>(v))] = s.counts[v];
  j["counts"] = std::move(counts);
  return j.dump(2) + "\n";
}

TraceStats stats_from_json(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text);
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw std::invalid_argument("unsupported stats file version");
  TraceStats s;
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "even_aligned")
    s.mode = StatsMode::even_aligned;
  else if (mode == "sliding")
    s.mode = StatsMode::sliding;
  else
    throw std::invalid_argument("unknown stats mode: " + mode);
  s.total_pairs = j.at("total_pairs").get<std::uint64_t>();
  for (const auto& [key, val] : j.at("counts").items())
    s.counts[trace_from_hex(key)] = val.get<std::uint64_t>();
  return s;
}

std::vector<std::uint64_t> count_words(const PatternSet& ps,
                                       std::string_view sample) {
  std::vector<std::uint64_t> out(ps.patterns.size(), 0);
  for (const auto& p : ps.patterns) {
    const std::string& w = p.bytes;
    if (w.size() > sample.size()) continue;
    for (std::size_t o = 0; o + w.size() <= sample.size(); ++o)
      if (sample.compare(o, w.size(), w) == 0) ++out[p.id];
  }
  return out;
}

double cost(const CostFunction& cf, Trace t, const PatternSet& ps) {
  switch (cf.kind) {
    case CostKind::unit:
      return 1.0;
    case CostKind::rare_in_strings: {
      std::uint64_t n = 0;
      for (const auto& p : ps.patterns)
        for (std::size_t l = 0; l + 1 < p.bytes.size(); ++l)
          n += static_cast<std::uint64_t>(occ(p.bytes, t, l));
      return static_cast<double>(n);
    }
    case CostKind::rare_in_input: {
      if (!cf.stats) throw MissingStats();
      return cf.stats->probability(t);
    }
    case CostKind::conditional_fp: {
      if (!cf.stats) throw MissingStats();
      if (cf.stats->total_pairs == 0) throw ZeroPairStats();
      if (cf.word_counts.size() != ps.patterns.size())
        throw MissingStats();
      std::uint64_t trace_count = cf.stats->counts[t];
      if (trace_count == 0) return 0.0;
      double total = 0.0;
      for (const auto& p : ps.patterns) {
        if (!(assoc(p.bytes, t, 0) || assoc(p.bytes, t, 1))) continue;
        double pwt = static_cast<double>(cf.word_counts[p.id]) /
                     static_cast<double>(trace_count);
        total += std::clamp(pwt, 0.0, 1.0);
      }
      return -total;
    }
  }
  return 1.0;
}

}  // namespace b2
