#include "b2/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <memory>
#include <sstream>

#include "b2/oracle.hpp"
#include "b2/stats.hpp"

namespace b2 {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mbit_per_sec(std::size_t bytes, double seconds) {
  if (seconds <= 0.0) return 0.0;
  return static_cast<double>(bytes) * 8.0 / seconds / 1e6;
}

template <typename Fn>
double timed(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

MotifSet solve(const CoverageMatrix& cm, const CostFunction& cf,
               const PatternSet& ps, const BenchConfig& config) {
  if (config.solver == SolverChoice::exact)
    return solve_exact(cm, cf, ps, config.time_limit);
  return solve_greedy(cm, cf, ps);
}

}  // namespace

BenchOutcome bench_run(const PatternSet& ps, std::string_view input,
                       const BenchConfig& config) {
  BenchOutcome outcome;
  outcome.bytes_consumed = input.size();

  // Statistics for the rare-input variant and the probability estimates,
  // gathered on the first third of the input.
  auto stats = std::make_shared<TraceStats>(
      collect_stats(input.substr(0, input.size() / 3),
                    StatsMode::even_aligned));

  CoverageMatrix cm = build_coverage(ps);

  struct Variant {
    std::string name;
    CostFunction cf;
  };
  std::vector<Variant> variants;
  variants.push_back({"min", {CostKind::unit, nullptr, {}}});
  variants.push_back({"rare-strings", {CostKind::rare_in_strings, nullptr, {}}});
  variants.push_back({"rare-input", {CostKind::rare_in_input, stats, {}}});

  for (auto& variant : variants) {
    VariantResult vr;
    vr.name = variant.name;
    MotifSet ms = solve(cm, variant.cf, ps, config);
    auto plan = assign_mappings(ps, ms, {&variant.cf, {}});
    CompiledMatcher matcher = compile(ps, plan);

    vr.motif_count = ms.motifs.size();
    vr.objective = ms.objective;
    vr.memory_bytes = memory_report(matcher).total();
    if (stats->total_pairs > 0)
      for (const auto& mt : matcher.tries)
        vr.est_probability += stats->probability(mt.motif);

    MatchCounters counters;
    std::vector<MatchReport> reports;
    std::vector<double> times;
    for (int r = 0; r < std::max(config.repeat, 1); ++r) {
      counters = MatchCounters{};
      times.push_back(timed([&] {
        reports = config.threads > 1
                      ? match_parallel(matcher, input, config.threads,
                                       &counters)
                      : match(matcher, input, &counters);
      }));
    }
    vr.throughput_mbit = mbit_per_sec(input.size(), median(times));
    vr.match_count = reports.size();
    vr.harvest_count = counters.harvest_count;
    vr.fast_path_probes = counters.fast_path_probes;
    if (counters.fast_path_probes > 0)
      vr.actual_probability = static_cast<double>(counters.harvest_count) /
                              static_cast<double>(counters.fast_path_probes);
    outcome.variants.push_back(std::move(vr));
  }

  {
    VariantResult base;
    std::vector<double> times;
    std::vector<MatchReport> reports;
    if (config.baseline == Baseline::ac) {
      base.name = "ac";
      ACMatcher ac(ps);
      base.memory_bytes = ac.memory_bytes();
      for (int r = 0; r < std::max(config.repeat, 1); ++r)
        times.push_back(timed([&] { reports = ac.match(input); }));
    } else {
      base.name = "naive";
      NaiveMatcher naive(ps);
      for (int r = 0; r < std::max(config.repeat, 1); ++r)
        times.push_back(timed([&] { reports = naive.match(input); }));
    }
    base.throughput_mbit = mbit_per_sec(input.size(), median(times));
    base.match_count = reports.size();
    outcome.baseline = std::move(base);
  }
  return outcome;
}

std::string format_bench_table(const BenchOutcome& outcome) {
  std::ostringstream out;
  out << "bytes consumed: " << outcome.bytes_consumed << "\n";
  out << std::left << std::setw(14) << "variant" << std::right
      << std::setw(14) << "Mbit/s" << std::setw(10) << "motifs"
      << std::setw(12) << "matches" << std::setw(12) << "harvest"
      << std::setw(12) << "prob(est)" << std::setw(12) << "prob(act)"
      << std::setw(12) << "mem(B)" << "\n";
  auto row = [&out](const VariantResult& v, bool probs) {
    out << std::left << std::setw(14) << v.name << std::right << std::fixed
        << std::setprecision(3) << std::setw(14) << v.throughput_mbit
        << std::setw(10) << v.motif_count << std::setw(12) << v.match_count
        << std::setw(12) << v.harvest_count;
    if (probs)
      out << std::setprecision(6) << std::setw(12) << v.est_probability
          << std::setw(12) << v.actual_probability;
    else
      out << std::setw(12) << "-" << std::setw(12) << "-";
    out << std::setw(12) << v.memory_bytes << "\n";
  };
  for (const auto& v : outcome.variants) row(v, true);
  row(outcome.baseline, false);
  return out.str();
}

}  // namespace b2
