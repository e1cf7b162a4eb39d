#include "b2/oracle.hpp"

#include <algorithm>
#include <deque>

namespace b2 {

namespace {

void fan_out(const PatternSet& ps,
             std::vector<std::pair<std::uint32_t, std::size_t>>& raw,
             std::vector<MatchReport>& out) {
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  for (const auto& [pid, start] : raw) {
    const Pattern& p = ps.patterns[pid];
    for (std::size_t sid : p.source_ids)
      out.push_back({sid, start, start + p.bytes.size()});
  }
  std::sort(out.begin(), out.end(),
            [](const MatchReport& a, const MatchReport& b) {
              return std::tie(a.start, a.pattern_id) <
                     std::tie(b.start, b.pattern_id);
            });
}

}  // namespace

NaiveMatcher::NaiveMatcher(const PatternSet& ps) : ps_(ps) {
  for (const auto& p : ps_.patterns)
    by_first_byte_[static_cast<unsigned char>(p.bytes[0])].push_back(p.id);
}

std::vector<MatchReport> NaiveMatcher::match(std::string_view input) const {
  std::vector<std::pair<std::uint32_t, std::size_t>> raw;
  for (std::size_t o = 0; o < input.size(); ++o) {
    const auto& bucket = by_first_byte_[static_cast<unsigned char>(input[o])];
    for (std::size_t pid : bucket) {
      const std::string& w = ps_.patterns[pid].bytes;
      if (o + w.size() <= input.size() &&
          input.compare(o, w.size(), w) == 0)
        raw.emplace_back(static_cast<std::uint32_t>(pid), o);
    }
  }
  std::vector<MatchReport> out;
  fan_out(ps_, raw, out);
  return out;
}

std::vector<MatchReport> naive_match(const PatternSet& ps,
                                     std::string_view input) {
  return NaiveMatcher(ps).match(input);
}

ACMatcher::ACMatcher(const PatternSet& ps) : ps_(ps) {
  nodes_.emplace_back();  // root
  for (const auto& p : ps_.patterns) {
    std::int32_t state = 0;
    for (char c : p.bytes) {
      unsigned char b = static_cast<unsigned char>(c);
      auto& next = nodes_[static_cast<std::size_t>(state)].next;
      auto it = std::lower_bound(
          next.begin(), next.end(), b,
          [](const auto& e, unsigned char x) { return e.first < x; });
      if (it != next.end() && it->first == b) {
        state = it->second;
      } else {
        std::int32_t child = static_cast<std::int32_t>(nodes_.size());
        // insertion may reallocate nodes_, so take the iterator offset first
        std::size_t at = static_cast<std::size_t>(it - next.begin());
        nodes_.emplace_back();
        auto& next2 = nodes_[static_cast<std::size_t>(state)].next;
        next2.insert(next2.begin() + static_cast<std::ptrdiff_t>(at),
                     {b, child});
        state = child;
      }
    }
    nodes_[static_cast<std::size_t>(state)].outputs.push_back(
        static_cast<std::uint32_t>(p.id));
  }

  // BFS failure links; outputs merged from the failure target.
  std::deque<std::int32_t> queue;
  for (const auto& [b, child] : nodes_[0].next) {
    nodes_[static_cast<std::size_t>(child)].fail = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    std::int32_t state = queue.front();
    queue.pop_front();
    for (const auto& [b, child] : nodes_[static_cast<std::size_t>(state)].next) {
      std::int32_t f = nodes_[static_cast<std::size_t>(state)].fail;
      f = step(f, b);
      nodes_[static_cast<std::size_t>(child)].fail = f;
      const auto& fo = nodes_[static_cast<std::size_t>(f)].outputs;
      auto& co = nodes_[static_cast<std::size_t>(child)].outputs;
      co.insert(co.end(), fo.begin(), fo.end());
      queue.push_back(child);
    }
  }
}

std::int32_t ACMatcher::step(std::int32_t state, unsigned char b) const {
  for (;;) {
    const auto& next = nodes_[static_cast<std::size_t>(state)].next;
    auto it = std::lower_bound(
        next.begin(), next.end(), b,
        [](const auto& e, unsigned char x) { return e.first < x; });
    if (it != next.end() && it->first == b) return it->second;
    if (state == 0) return 0;
    state = nodes_[static_cast<std::size_t>(state)].fail;
  }
}

std::vector<MatchReport> ACMatcher::match(std::string_view input) const {
  std::vector<std::pair<std::uint32_t, std::size_t>> raw;
  std::int32_t state = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    state = step(state, static_cast<unsigned char>(input[i]));
    for (std::uint32_t pid : nodes_[static_cast<std::size_t>(state)].outputs) {
      std::size_t len = ps_.patterns[pid].bytes.size();
      raw.emplace_back(pid, i + 1 - len);
    }
  }
  std::vector<MatchReport> out;
  fan_out(ps_, raw, out);
  return out;
}

std::size_t ACMatcher::memory_bytes() const {
  std::size_t total = nodes_.size() * sizeof(Node);
  for (const auto& node : nodes_) {
    total += node.next.size() * sizeof(std::pair<unsigned char, std::int32_t>);
    total += node.outputs.size() * sizeof(std::uint32_t);
  }
  return total;
}

std::vector<MatchReport> ac_match(const PatternSet& ps,
                                  std::string_view input) {
  return ACMatcher(ps).match(input);
}

}  // namespace b2
