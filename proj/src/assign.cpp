#include "b2/assign.hpp"

#include <algorithm>
#include <cmath>

namespace b2 {

namespace {

struct Candidate {
  Trace motif;
  std::size_t anchor;
};

}  // namespace

AssignmentPlan assign_mappings(const PatternSet& ps, const MotifSet& ms,
                               const AssignConfig& config) {
  AssignmentPlan plan;
  std::map<Trace, std::size_t> load;  // current resolve-set sizes

  for (const auto& p : ps.patterns) {
    const std::string& w = p.bytes;
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<Candidate> candidates;
      for (std::size_t l = static_cast<std::size_t>(parity); l + 1 < w.size();
           l += 2) {
        Trace t = trace_at(w, l);
        if (ms.contains(t)) candidates.push_back({t, l});
      }
      if (candidates.empty()) throw InfeasibleMotifSet(p.id, parity);

      // Rank by motif cost first. The default `centered` config then
      // spreads load across resolve-sets and prefers anchors near the word
      // middle (shallower tries); the `leftmost` config instead commits to
      // the smallest anchor outright, which makes equally priced mappings
      // land on a predictable motif regardless of load.
      double mid = static_cast<double>(w.size()) / 2.0;
      auto rank = [&](const Candidate& c) {
        double cst =
            config.cost_fn ? cost(*config.cost_fn, c.motif, ps) : 1.0;
        auto it = load.find(c.motif);
        double sz = it == load.end() ? 0.0 : static_cast<double>(it->second);
        double second, third;
        if (config.tie_break == AnchorTieBreak::centered) {
          second = sz;
          third = std::abs(static_cast<double>(c.anchor) - mid);
        } else {
          second = static_cast<double>(c.anchor);
          third = sz;
        }
        return std::make_tuple(cst, second, third,
                               static_cast<unsigned>(c.motif), c.anchor);
      };
      const Candidate* best = &candidates[0];
      auto best_rank = rank(*best);
      for (const auto& c : candidates) {
        auto r = rank(c);
        if (r < best_rank) {
          best = &c;
          best_rank = r;
        }
      }

      plan.mappings.push_back({p.id, parity, best->motif, best->anchor});
      auto& rs = plan.resolve_sets[best->motif];
      rs.motif = best->motif;
      // The same pattern may legitimately appear twice in one resolve-set,
      // but only with anchors of opposite parity; identical (pattern,
      // anchor) pairs are impossible since anchors differ in parity here.
      rs.entries.push_back({p.id, best->anchor});
      ++load[best->motif];
    }
  }
  return plan;
}

}  // namespace b2
