#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "b2/bench.hpp"
#include "b2/explain.hpp"
#include "b2/matcher.hpp"
#include "b2/oracle.hpp"
#include "b2/optimizer.hpp"
#include "b2/pattern.hpp"
#include "b2/stats.hpp"

namespace {

enum ExitCode { kOk = 0, kFileError = 1, kPatternTooShort = 2, kSolverError = 3 };

int log_level() {
  const char* env = std::getenv("B2_LOG");
  if (!env) return 0;
  std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "b2: " << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

b2::PatternSet load_patterns(const std::string& path) {
  auto raw = b2::parse_pattern_file_text(read_file(path));
  return b2::validate_patterns(raw);
}

struct CompileArgs {
  std::string patterns_file;
  std::string cost_kind = "min";
  std::string stats_file;
  std::string solver = "exact";
  double time_limit_secs = 30.0;
  std::string out_file;
};

int run_compile(const CompileArgs& args) {
  b2::PatternSet ps = load_patterns(args.patterns_file);
  log_info("loaded " + std::to_string(ps.patterns.size()) +
           " unique patterns");

  b2::CostFunction cf;
  if (args.cost_kind == "min") {
    cf.kind = b2::CostKind::unit;
  } else if (args.cost_kind == "rare-strings") {
    cf.kind = b2::CostKind::rare_in_strings;
  } else if (args.cost_kind == "rare-input") {
    cf.kind = b2::CostKind::rare_in_input;
    if (args.stats_file.empty())
      throw b2::MissingStats();
    cf.stats = std::make_shared<b2::TraceStats>(
        b2::stats_from_json(read_file(args.stats_file)));
  } else {
    throw std::runtime_error("unknown cost kind: " + args.cost_kind);
  }

  b2::CoverageMatrix cm = b2::build_coverage(ps);
  b2::MotifSet ms;
  if (args.solver == "exact") {
    auto limit = std::chrono::milliseconds(
        static_cast<std::int64_t>(args.time_limit_secs * 1000.0));
    std::vector<b2::SolveLogEntry> trace;
    ms = b2::solve_exact(cm, cf, ps, limit,
                         log_level() >= 2 ? &trace : nullptr);
    for (const auto& e : trace)
      std::cerr << "b2: incumbent objective " << e.objective << " after "
                << e.nodes << " nodes, " << e.elapsed_ms << " ms\n";
  } else if (args.solver == "greedy") {
    ms = b2::solve_greedy(cm, cf, ps);
  } else {
    throw std::runtime_error("unknown solver: " + args.solver);
  }

  auto plan = b2::assign_mappings(ps, ms, {&cf, {}});
  b2::CompiledMatcher matcher = b2::compile(ps, plan);
  write_file(args.out_file, b2::serialize(matcher));

  const char* status = ms.status == b2::SolverStatus::optimal ? "optimal"
                       : ms.status == b2::SolverStatus::feasible_timeout
                           ? "feasible (timeout)"
                           : "greedy";
  std::cout << "patterns: " << ps.patterns.size() << " unique, "
            << ps.duplicates.size() << " duplicated byte sequences\n";
  std::cout << "motifs: " << ms.motifs.size() << " (objective "
            << ms.objective << ", " << status << ")\n";
  std::cout << "tries:\n";
  for (const auto& mt : matcher.tries)
    std::cout << "  " << b2::trace_pretty(mt.motif) << ": "
              << mt.entries.size() << " entries, " << mt.node_count()
              << " nodes, depth " << mt.max_depth << "\n";
  auto mem = b2::memory_report(matcher);
  std::cout << "memory: dispatch " << mem.dispatch_bytes << " B, trie nodes "
            << mem.trie_node_bytes << " B, fragments "
            << mem.trie_fragment_bytes << " B, entries "
            << mem.trie_entry_bytes << " B, patterns " << mem.pattern_bytes
            << " B, total " << mem.total() << " B\n";
  return kOk;
}

struct ScanArgs {
  std::string artifact_file;
  std::string input_file;
  std::string format = "text";
  bool counters = false;
  int threads = 1;
};

int run_scan(const ScanArgs& args) {
  b2::CompiledMatcher cm = b2::deserialize(read_file(args.artifact_file));
  std::string input = read_file(args.input_file);
  b2::MatchCounters counters;
  auto reports =
      args.threads > 1
          ? b2::match_parallel(cm, input, args.threads, &counters)
          : b2::match(cm, input, &counters);

  for (const auto& r : reports) {
    std::string hex;
    for (const auto& cp : cm.patterns.patterns)
      for (std::size_t sid : cp.source_ids)
        if (sid == r.pattern_id) {
          static const char* d = "0123456789abcdef";
          for (unsigned char b : cp.bytes) {
            hex.push_back(d[b >> 4]);
            hex.push_back(d[b & 0xf]);
          }
        }
    if (args.format == "json") {
      nlohmann::ordered_json j;
      j["start"] = r.start;
      j["len"] = r.end - r.start;
      j["pattern_id"] = r.pattern_id;
      j["pattern_hex"] = hex;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << r.start << "\t" << (r.end - r.start) << "\t"
                << r.pattern_id << "\t" << hex << "\n";
    }
  }
  if (args.counters) {
    nlohmann::ordered_json j;
    j["fast_path_probes"] = counters.fast_path_probes;
    j["harvest_count"] = counters.harvest_count;
    j["slow_path_node_visits"] = counters.slow_path_node_visits;
    j["fragment_bytes_compared"] = counters.fragment_bytes_compared;
    std::cout << j.dump() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bouma2 multiple exact string-match engine"};
  app.require_subcommand(1);

  CompileArgs compile_args;
  auto* compile_cmd =
      app.add_subcommand("compile", "Build a compiled match artifact");
  compile_cmd->add_option("--patterns", compile_args.patterns_file)
      ->required();
  compile_cmd->add_option("--cost", compile_args.cost_kind)
      ->check(CLI::IsMember({"min", "rare-strings", "rare-input"}));
  compile_cmd->add_option("--stats", compile_args.stats_file);
  compile_cmd->add_option("--solver", compile_args.solver)
      ->check(CLI::IsMember({"exact", "greedy"}));
  compile_cmd->add_option("--time-limit", compile_args.time_limit_secs);
  compile_cmd->add_option("-o,--out", compile_args.out_file)->required();

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "Scan an input file");
  scan_cmd->add_option("--artifact", scan_args.artifact_file)->required();
  scan_cmd->add_option("--input", scan_args.input_file)->required();
  scan_cmd->add_option("--format", scan_args.format)
      ->check(CLI::IsMember({"text", "json"}));
  scan_cmd->add_flag("--counters", scan_args.counters);
  scan_cmd->add_option("--threads", scan_args.threads);

  std::string stats_input, stats_mode = "even", stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Collect 2-gram statistics");
  stats_cmd->add_option("--input", stats_input)->required();
  stats_cmd->add_option("--mode", stats_mode)
      ->check(CLI::IsMember({"even", "sliding"}));
  stats_cmd->add_option("-o,--out", stats_out)->required();

  std::string bench_patterns, bench_input, bench_baseline = "ac",
                               bench_solver = "greedy";
  int bench_repeat = 3, bench_threads = 1;
  auto* bench_cmd =
      app.add_subcommand("bench", "Throughput comparison against a baseline");
  bench_cmd->add_option("--patterns", bench_patterns)->required();
  bench_cmd->add_option("--input", bench_input)->required();
  bench_cmd->add_option("--baseline", bench_baseline)
      ->check(CLI::IsMember({"naive", "ac"}));
  bench_cmd->add_option("--repeat", bench_repeat);
  bench_cmd->add_option("--threads", bench_threads);
  bench_cmd->add_option("--solver", bench_solver)
      ->check(CLI::IsMember({"exact", "greedy"}));

  std::string explain_artifact_file, explain_trie, explain_graph;
  auto* explain_cmd =
      app.add_subcommand("explain", "Render resolve-sets and mangled-tries");
  explain_cmd->add_option("--artifact", explain_artifact_file)->required();
  explain_cmd->add_option("--trie", explain_trie,
                          "restrict to one motif (4 hex digits)");
  explain_cmd->add_option("--graph", explain_graph,
                          "write a graph-description file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile_cmd) return run_compile(compile_args);
    if (*scan_cmd) return run_scan(scan_args);
    if (*stats_cmd) {
      auto mode = stats_mode == "even" ? b2::StatsMode::even_aligned
                                       : b2::StatsMode::sliding;
      auto stats = b2::collect_stats(read_file(stats_input), mode);
      write_file(stats_out, b2::stats_to_json(stats));
      return kOk;
    }
    if (*bench_cmd) {
      b2::PatternSet ps = load_patterns(bench_patterns);
      std::string input = read_file(bench_input);
      b2::BenchConfig config;
      config.baseline = bench_baseline == "naive" ? b2::Baseline::naive
                                                  : b2::Baseline::ac;
      config.repeat = bench_repeat;
      config.threads = bench_threads;
      config.solver = bench_solver == "exact" ? b2::SolverChoice::exact
                                              : b2::SolverChoice::greedy;
      auto outcome = b2::bench_run(ps, input, config);
      std::cout << b2::format_bench_table(outcome);
      return kOk;
    }
    if (*explain_cmd) {
      b2::CompiledMatcher cm =
          b2::deserialize(read_file(explain_artifact_file));
      int only = -1;
      if (!explain_trie.empty())
        only = static_cast<int>(b2::trace_from_hex(explain_trie));
      std::cout << b2::explain_artifact(cm, only);
      if (!explain_graph.empty()) {
        std::ostringstream g;
        for (const auto& mt : cm.tries) {
          if (only >= 0 && mt.motif != static_cast<b2::Trace>(only)) continue;
          g << "trie " << b2::trace_hex(mt.motif) << "\n";
          g << b2::render_trie_graph(mt);
        }
        write_file(explain_graph, g.str());
      }
      return kOk;
    }
  } catch (const b2::PatternTooShort& e) {
    std::cerr << "b2: " << e.what() << "\n";
    return kPatternTooShort;
  } catch (const b2::EmptyPatternSet& e) {
    std::cerr << "b2: " << e.what() << "\n";
    return kFileError;
  } catch (const b2::InfeasibleMotifSet& e) {
    std::cerr << "b2: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "b2: " << e.what() << "\n";
    return kFileError;
  }
  return kOk;
}
