#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"

#ifdef _WIN32
#error "posix only"
#endif
#include <sys/wait.h>

namespace {

std::string cli_path() {
  const char* p = std::getenv("BRIDGEFOLD_CLI");
  REQUIRE(p != nullptr);
  return p;
}

std::string data_path(const std::string& name) {
  const char* d = std::getenv("BRIDGEFOLD_DATA");
  REQUIRE(d != nullptr);
  return std::string(d) + "/" + name;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const RunResult& r, const std::string& needle) {
  return r.output.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("bridge subcommand") {
  RunResult r = run("bridge " + data_path("sum_3_2__5_2.tree") + " --format json");
  CHECK(r.exit_code == 0);
  CHECK(has(r, "\"bridge\": 3"));
  CHECK(has(r, "\"agreement\": true"));

  std::string tmp = "/tmp/bridgefold_cli_torus.tree";
  std::ofstream(tmp) << "torus(3,2)\n";
  RunResult t = run("bridge " + tmp);
  CHECK(t.exit_code == 0);
  CHECK(has(t, "bridge      2"));
  CHECK(has(t, "agreement   yes"));

  RunResult bad = run("bridge " + data_path("bad.tree"));
  CHECK(bad.exit_code == 2);
  CHECK(has(bad, "parse error at line 2"));

  RunResult missing = run("bridge /nonexistent.tree");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("fold subcommand") {
  RunResult dup =
      run("fold " + data_path("sum_3_2__5_2.tree") + " " + data_path("dup.paths"));
  CHECK(dup.exit_code == 0);
  CHECK(has(dup, "folded      yes"));
  CHECK(has(dup, "complete    no"));
  CHECK(has(dup, "monotone    yes"));
  CHECK(has(dup, "complexity  (1, 3)"));

  RunResult full = run("fold " + data_path("sum_twin.tree") + " " +
                       data_path("complete.paths") + " --exact-torus");
  CHECK(full.exit_code == 0);
  CHECK(has(full, "complete    yes"));
  CHECK(has(full, "complexity  (3, 4)"));

  RunResult empty =
      run("fold " + data_path("sum_twin.tree") + " " + data_path("empty.paths"));
  CHECK(empty.exit_code == 0);
  CHECK(has(empty, "complexity  (0, 0)"));

  RunResult json = run("fold " + data_path("sat_2_1.tree") + " " + data_path("nc.paths") +
                       " --format json");
  CHECK(json.exit_code == 0);
  CHECK(has(json, "\"monotone\": true"));
  CHECK(has(json, "normal_closure"));
}

TEST_CASE("stallings subcommand") {
  RunResult whole = run("stallings " + data_path("whole.gens"));
  CHECK(whole.exit_code == 0);
  CHECK(has(whole, "whole group (rank 2)"));

  RunResult single = run("stallings " + data_path("single.gens") + " --format json");
  CHECK(single.exit_code == 0);
  CHECK(has(single, "\"rank\": 1"));
  CHECK(has(single, "\"index\": 1"));
  CHECK(has(single, "\"conjugator\": \"1\""));

  RunResult pair = run("stallings " + data_path("pair.gens"));
  CHECK(pair.exit_code == 0);
  CHECK(has(pair, "free basis, rank 2"));
  CHECK(has(pair, "@ x"));
}

TEST_CASE("torus-check subcommand") {
  RunResult ok = run("torus-check 5 2");
  CHECK(ok.exit_code == 0);

  RunResult single = run("torus-check 5 3 -r 2 --format json");
  CHECK(single.exit_code == 0);
  CHECK(has(single, "\"holds\": true"));
  CHECK(has(single, "\"index_bound\": -7"));

  RunResult bad = run("torus-check 4 2");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("presentation subcommand") {
  RunResult r = run("presentation " + data_path("sum_3_2__5_2.tree") + " --exact-torus");
  CHECK(r.exit_code == 0);
  CHECK(has(r, "c^-1,u^2,v"));
  CHECK(has(r, "c^-1,u^3,v"));

  RunResult usage = run("presentation");
  CHECK(usage.exit_code == 2);
}
