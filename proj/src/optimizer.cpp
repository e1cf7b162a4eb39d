#include "b2/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace b2 {

CoverageMatrix build_coverage(const PatternSet& ps) {
  CoverageMatrix cm;
  cm.columns = extract_trace_set(ps);
  std::vector<std::size_t> col_index(65536, SIZE_MAX);
  for (std::size_t c = 0; c < cm.columns.size(); ++c)
    col_index[cm.columns[c]] = c;
  cm.col_rows.resize(cm.columns.size());

  for (const auto& p : ps.patterns) {
    for (int parity = 0; parity < 2; ++parity) {
      CoverageRow row;
      row.pattern_id = p.id;
      row.parity = parity;
      std::set<std::size_t> cols;
      for (std::size_t l = static_cast<std::size_t>(parity);
           l + 1 < p.bytes.size(); l += 2)
        cols.insert(col_index[trace_at(p.bytes, l)]);
      row.cols.assign(cols.begin(), cols.end());
      std::size_t r = cm.rows.size();
      for (std::size_t c : row.cols) cm.col_rows[c].push_back(r);
      cm.rows.push_back(std::move(row));
    }
  }
  return cm;
}

bool MotifSet::contains(Trace t) const {
  return std::binary_search(motifs.begin(), motifs.end(), t);
}

bool motif_set_feasible(const PatternSet& ps, const MotifSet& ms) {
  for (const auto& p : ps.patterns) {
    for (int parity = 0; parity < 2; ++parity) {
      bool covered = false;
      for (Trace t : ms.motifs)
        if (assoc(p.bytes, t, parity)) {
          covered = true;
          break;
        }
      if (!covered) return false;
    }
  }
  return true;
}

namespace {

std::vector<double> column_costs(const CoverageMatrix& cm,
                                 const CostFunction& cf,
                                 const PatternSet& ps) {
  std::vector<double> costs(cm.columns.size());
  for (std::size_t c = 0; c < cm.columns.size(); ++c)
    costs[c] = cost(cf, cm.columns[c], ps);
  return costs;
}

MotifSet finish(const CoverageMatrix& cm, const std::vector<double>& costs,
                std::vector<std::size_t> selected, SolverStatus status) {
  MotifSet ms;
  ms.status = status;
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()),
                 selected.end());
  ms.objective = 0.0;
  for (std::size_t c : selected) {
    ms.motifs.push_back(cm.columns[c]);
    ms.objective += costs[c];
  }
  return ms;
}

// Removes selected columns whose removal keeps every row covered, most
// expensive first. Keeps the match-time motif-set minimal when negative
// costs made the solver over-select.
void prune_redundant(const CoverageMatrix& cm, const std::vector<double>& costs,
                     std::vector<std::size_t>& selected) {
  std::vector<int> cover(cm.rows.size(), 0);
  for (std::size_t c : selected)
    for (std::size_t r : cm.col_rows[c]) ++cover[r];

  std::vector<std::size_t> order = selected;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (costs[a] != costs[b]) return costs[a] > costs[b];
    return cm.columns[a] > cm.columns[b];
  });
  std::set<std::size_t> keep(selected.begin(), selected.end());
  for (std::size_t c : order) {
    if (costs[c] < 0.0) continue;  // removal would worsen the objective
    bool redundant = true;
    for (std::size_t r : cm.col_rows[c])
      if (cover[r] < 2) {
        redundant = false;
        break;
      }
    if (redundant) {
      keep.erase(c);
      for (std::size_t r : cm.col_rows[c]) --cover[r];
    }
  }
  selected.assign(keep.begin(), keep.end());
}

std::vector<std::size_t> greedy_select(const CoverageMatrix& cm,
                                       const std::vector<double>& costs) {
  std::vector<bool> covered(cm.rows.size(), false);
  std::size_t uncovered = cm.rows.size();
  std::vector<std::size_t> selected;
  while (uncovered > 0) {
    std::size_t best = SIZE_MAX;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cm.columns.size(); ++c) {
      std::size_t newly = 0;
      for (std::size_t r : cm.col_rows[c])
        if (!covered[r]) ++newly;
      if (newly == 0) continue;
      double ratio = costs[c] / static_cast<double>(newly);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = c;
      }
    }
    if (best == SIZE_MAX) break;  // infeasible matrix; cannot happen for valid input
    selected.push_back(best);
    for (std::size_t r : cm.col_rows[best])
      if (!covered[r]) {
        covered[r] = true;
        --uncovered;
      }
  }
  return selected;
}

struct ExactSearch {
  const CoverageMatrix& cm;
  const std::vector<double>& costs;
  std::chrono::steady_clock::time_point deadline{};
  std::chrono::steady_clock::time_point start{};
  std::vector<SolveLogEntry>* log;

  std::vector<int> cover{};        // per-row count of selected covering columns
  std::vector<bool> selected{};  // per column
  std::vector<bool> excluded{};  // per column
  std::size_t uncovered = 0;
  double current_cost = 0.0;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_selection{};
  std::uint64_t nodes = 0;
  bool timed_out = false;

  void select(std::size_t c) {
    selected[c] = true;
    current_cost += costs[c];
    for (std::size_t r : cm.col_rows[c])
      if (cover[r]++ == 0) --uncovered;
  }

  void deselect(std::size_t c) {
    selected[c] = false;
    current_cost -= costs[c];
    for (std::size_t r : cm.col_rows[c])
      if (--cover[r] == 0) ++uncovered;
  }

  void record_incumbent() {
    best_cost = current_cost;
    best_selection.clear();
    for (std::size_t c = 0; c < selected.size(); ++c)
      if (selected[c]) best_selection.push_back(c);
    if (log)
      log->push_back(
          {best_cost, nodes,
           std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
               .count()});
  }

  // Lower bound: current cost plus the cheapest way to cover the hardest
  // uncovered row. Returns infinity when some row has no available column.
  double lower_bound() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < cm.rows.size(); ++r) {
      if (cover[r] > 0) continue;
      double cheapest = std::numeric_limits<double>::infinity();
      for (std::size_t c : cm.rows[r].cols)
        if (!excluded[c]) cheapest = std::min(cheapest, std::max(costs[c], 0.0));
      if (cheapest == std::numeric_limits<double>::infinity())
        return cheapest;
      worst = std::max(worst, cheapest);
    }
    return current_cost + worst;
  }

  std::size_t pick_branch_column() const {
    std::size_t best = SIZE_MAX;
    double best_score = -1.0;
    for (std::size_t c = 0; c < cm.columns.size(); ++c) {
      if (selected[c] || excluded[c]) continue;
      std::size_t newly = 0;
      for (std::size_t r : cm.col_rows[c])
        if (cover[r] == 0) ++newly;
      if (newly == 0) continue;
      double score =
          static_cast<double>(newly) / std::max(costs[c], 1e-9);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    return best;
  }

  void dfs() {
    if (timed_out) return;
    if ((++nodes & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    if (uncovered == 0) {
      if (current_cost < best_cost - 1e-9) record_incumbent();
      return;
    }
    if (lower_bound() >= best_cost - 1e-9) return;
    std::size_t c = pick_branch_column();
    if (c == SIZE_MAX) return;

    select(c);
    dfs();
    deselect(c);

    excluded[c] = true;
    dfs();
    excluded[c] = false;
  }
};

}  // namespace

MotifSet solve_greedy(const CoverageMatrix& cm, const CostFunction& cf,
                      const PatternSet& ps) {
  auto costs = column_costs(cm, cf, ps);
  return finish(cm, costs, greedy_select(cm, costs), SolverStatus::greedy);
}

MotifSet fallback_motifs(const PatternSet& ps) {
  std::set<Trace> motifs;
  for (const auto& p : ps.patterns) {
    motifs.insert(trace_at(p.bytes, 0));
    motifs.insert(trace_at(p.bytes, 1));
  }
  MotifSet ms;
  ms.motifs.assign(motifs.begin(), motifs.end());
  ms.objective = static_cast<double>(ms.motifs.size());
  ms.status = SolverStatus::greedy;
  return ms;
}

MotifSet solve_exact(const CoverageMatrix& cm, const CostFunction& cf,
                     const PatternSet& ps,
                     std::chrono::milliseconds time_limit,
                     std::vector<SolveLogEntry>* log) {
  auto costs = column_costs(cm, cf, ps);

  ExactSearch search{.cm = cm, .costs = costs, .log = log};
  search.start = std::chrono::steady_clock::now();
  search.deadline = search.start + time_limit;
  search.cover.assign(cm.rows.size(), 0);
  search.selected.assign(cm.columns.size(), false);
  search.excluded.assign(cm.columns.size(), false);
  search.uncovered = cm.rows.size();

  // A strictly-negative column always improves the objective and never
  // breaks feasibility, so the true optimum contains all of them.
  std::vector<std::size_t> forced;
  for (std::size_t c = 0; c < cm.columns.size(); ++c)
    if (costs[c] < 0.0) forced.push_back(c);
  for (std::size_t c : forced) search.select(c);

  // Incumbent: greedy cover united with the forced negatives.
  {
    auto greedy = greedy_select(cm, costs);
    std::set<std::size_t> incumbent(forced.begin(), forced.end());
    incumbent.insert(greedy.begin(), greedy.end());
    double obj = 0.0;
    for (std::size_t c : incumbent) obj += costs[c];
    search.best_cost = obj;
    search.best_selection.assign(incumbent.begin(), incumbent.end());
    if (log)
      log->push_back(
          {search.best_cost, 0,
           std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - search.start)
               .count()});
  }

  search.dfs();

  auto selection = search.best_selection;
  prune_redundant(cm, costs, selection);
  auto ms = finish(cm, costs, std::move(selection),
                   search.timed_out ? SolverStatus::feasible_timeout
                                    : SolverStatus::optimal);
  return ms;
}

}  // namespace b2
