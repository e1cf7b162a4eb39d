#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(B2_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("b2_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) {
    auto p = (path / name).string();
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  std::string file(const std::string& name) { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("compile then scan reports matches in the text format") {
  TempDir tmp;
  auto pats = tmp.file("pats.txt", "herd\nherbal\nerror\n");
  auto input = tmp.file("input.bin", "an error in the herbal herd");
  auto art = tmp.file("art.bin");

  auto c = run_cli("compile --patterns " + pats + " -o " + art);
  CHECK(c.exit_code == 0);
  CHECK(c.output.find("motifs:") != std::string::npos);
  CHECK(fs::exists(art));

  auto s = run_cli("scan --artifact " + art + " --input " + input);
  CHECK(s.exit_code == 0);
  // start \t len \t pattern_id \t pattern_hex, sorted by start
  CHECK(s.output ==
        "3\t5\t2\t6572726f72\n"
        "16\t6\t1\t68657262616c\n"
        "23\t4\t0\t68657264\n");
}

TEST_CASE("the running example finds error planted mid-buffer") {
  TempDir tmp;
  auto pats =
      tmp.file("pats.txt", "herd\nherbal\nerror\nupper\ndeeper\nferrarri\n");
  auto input = tmp.file("input.bin", "aaerroraa");
  auto art = tmp.file("art.bin");
  REQUIRE(run_cli("compile --patterns " + pats + " -o " + art).exit_code == 0);
  auto s = run_cli("scan --artifact " + art + " --input " + input);
  CHECK(s.exit_code == 0);
  CHECK(s.output == "2\t5\t2\t6572726f72\n");

  // empty input: zero report lines, clean exit
  auto empty = tmp.file("empty.bin", "");
  auto e = run_cli("scan --artifact " + art + " --input " + empty);
  CHECK(e.exit_code == 0);
  CHECK(e.output.empty());
}

TEST_CASE("scan emits json lines and counters on request") {
  TempDir tmp;
  auto pats = tmp.file("pats.txt", "abc\n");
  auto input = tmp.file("input.bin", "..abc..abc");
  auto art = tmp.file("art.bin");
  REQUIRE(run_cli("compile --patterns " + pats + " -o " + art).exit_code == 0);

  auto s = run_cli("scan --artifact " + art + " --input " + input +
                   " --format json --counters");
  CHECK(s.exit_code == 0);
  std::istringstream lines(s.output);
  std::string line;
  int reports = 0;
  bool saw_counters = false;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    if (j.contains("pattern_id")) {
      ++reports;
      CHECK(j["pattern_hex"] == "616263");
      CHECK(j["len"] == 3);
    } else {
      saw_counters = true;
      CHECK(j["fast_path_probes"] == 5);
      CHECK(j.contains("harvest_count"));
      CHECK(j.contains("slow_path_node_visits"));
      CHECK(j.contains("fragment_bytes_compared"));
    }
  }
  CHECK(reports == 2);
  CHECK(saw_counters);
}

TEST_CASE("stats subcommand writes a versioned json file") {
  TempDir tmp;
  auto input = tmp.file("sample.bin", "abababab");
  auto out = tmp.file("stats.json");
  auto r = run_cli("stats --input " + input + " --mode even -o " + out);
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["version"] == 1);
  CHECK(j["mode"] == "even_aligned");
  CHECK(j["total_pairs"] == 4);
  CHECK(j["counts"]["6162"] == 4);

  auto r2 = run_cli("stats --input " + input + " --mode sliding -o " + out);
  CHECK(r2.exit_code == 0);
  CHECK(nlohmann::json::parse(slurp(out))["total_pairs"] == 7);
}

TEST_CASE("rare-input compilation consumes a stats file") {
  TempDir tmp;
  auto pats = tmp.file("pats.txt", "abcd\nwxyz\n");
  auto sample = tmp.file("sample.bin", "abababababababwxyzqqqq");
  auto stats = tmp.file("stats.json");
  auto art = tmp.file("art.bin");
  REQUIRE(run_cli("stats --input " + sample + " -o " + stats).exit_code == 0);
  auto r = run_cli("compile --patterns " + pats + " --cost rare-input" +
                   " --stats " + stats + " -o " + art);
  CHECK(r.exit_code == 0);

  // forgetting the stats file is a usage error, not a crash
  auto bad = run_cli("compile --patterns " + pats +
                     " --cost rare-input -o " + art);
  CHECK(bad.exit_code == 1);
}

TEST_CASE("explain renders resolve-sets with caret anchors") {
  TempDir tmp;
  auto pats = tmp.file("pats.txt", "herd\nherbal\nerror\nupper\ndeeper\n");
  auto art = tmp.file("art.bin");
  REQUIRE(run_cli("compile --patterns " + pats + " -o " + art).exit_code == 0);

  auto r = run_cli("explain --artifact " + art);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("R_er") != std::string::npos);
  CHECK(r.output.find("^^") != std::string::npos);
  CHECK(r.output.find("mangled-trie") != std::string::npos);

  auto one = run_cli("explain --artifact " + art + " --trie 6572");
  CHECK(one.exit_code == 0);
  CHECK(one.output.find("R_er") != std::string::npos);
  CHECK(one.output.find("R_he") == std::string::npos);

  auto graph = tmp.file("g.txt");
  auto g = run_cli("explain --artifact " + art + " --graph " + graph);
  CHECK(g.exit_code == 0);
  CHECK(slurp(graph).find("trie 6572") != std::string::npos);
}

TEST_CASE("exit codes distinguish failure classes") {
  TempDir tmp;
  auto art = tmp.file("art.bin");

  // missing file -> 1
  CHECK(run_cli("compile --patterns /nonexistent.txt -o " + art).exit_code ==
        1);
  CHECK(run_cli("scan --artifact /nonexistent.bin --input /nonexistent.bin")
            .exit_code == 1);

  // short pattern -> 2
  auto shorty = tmp.file("short.txt", "abc\nxy\n");
  CHECK(run_cli("compile --patterns " + shorty + " -o " + art).exit_code == 2);

  // corrupt artifact -> 1
  auto junk = tmp.file("junk.bin", "not an artifact at all");
  auto input = tmp.file("input.bin", "x");
  CHECK(run_cli("scan --artifact " + junk + " --input " + input).exit_code ==
        1);
}

TEST_CASE("bench prints a comparison table") {
  TempDir tmp;
  auto pats = tmp.file("pats.txt", "herd\nherbal\nerror\nupper\ndeeper\n");
  std::string corpus;
  for (int i = 0; i < 2000; ++i)
    corpus += "the herd went deeper into the herbal error of the upper ";
  auto input = tmp.file("input.bin", corpus);

  auto r = run_cli("bench --patterns " + pats + " --input " + input +
                   " --repeat 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("variant") != std::string::npos);
  CHECK(r.output.find("min") != std::string::npos);
  CHECK(r.output.find("rare-strings") != std::string::npos);
  CHECK(r.output.find("rare-input") != std::string::npos);
  CHECK(r.output.find("ac") != std::string::npos);
  CHECK(r.output.find("Mbit/s") != std::string::npos);
}

TEST_CASE("scan with threads matches single-threaded output") {
  TempDir tmp;
  auto pats = tmp.file("pats.txt", "herd\nerror\n");
  std::string corpus;
  for (int i = 0; i < 500; ++i) corpus += "x herd error y";
  auto input = tmp.file("input.bin", corpus);
  auto art = tmp.file("art.bin");
  REQUIRE(run_cli("compile --patterns " + pats + " -o " + art).exit_code == 0);

  auto serial = run_cli("scan --artifact " + art + " --input " + input);
  auto parallel = run_cli("scan --artifact " + art + " --input " + input +
                          " --threads 4");
  CHECK(serial.exit_code == 0);
  CHECK(parallel.exit_code == 0);
  CHECK(serial.output == parallel.output);
}
