// Exercises the installed CLI surface end to end through the real binary.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
  const std::string command =
      std::string(G2LAB_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer;
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("list prints the catalog and exits 0") {
  const auto r = run_cli("list");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("grangier (§4)") != std::string::npos);
  CHECK(r.output.find("threshold (Appendix 2)") != std::string::npos);
}

TEST_CASE("grangier single-photon run matches the contract") {
  const auto r = run_cli(
      "run grangier --source single-photon --trials 100000 --seed 7 "
      "--no-timestamp");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"nc\": 0") != std::string::npos);
  CHECK(r.output.find("\"verdict\": \"nonclassical\"") != std::string::npos);
}

TEST_CASE("chsh-operator preset runs without a seed") {
  const auto r = run_cli("run chsh-operator --scenario optimal");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"bell_norm\": 1.414213562373") != std::string::npos);
  CHECK(r.output.find("\"classification\": \"DoublyIncompatible\"") !=
        std::string::npos);
}

TEST_CASE("missing seed is a config error (exit 2)") {
  const auto r = run_cli("run grangier --trials 10");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("$.seed") != std::string::npos);
}

TEST_CASE("unknown experiment is a config error (exit 2)") {
  const auto r = run_cli("run warp-drive --seed 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("source/detector mismatch is a config error (exit 2)") {
  const std::string path = "/tmp/g2lab_cli_mismatch.json";
  std::ofstream out(path);
  out << R"({
  "experiment": "grangier",
  "seed": 1,
  "trials": 10,
  "source": {"type": "single-photon"},
  "detector": {"model": "semiclassical"}
})";
  out.close();
  const auto r = run_cli("run grangier --config " + path);
  CHECK(r.exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("numerical failures exit 3") {
  // A custom scenario whose operators are not Hermitian.
  const std::string path = "/tmp/g2lab_cli_badop.json";
  std::ofstream out(path);
  out << R"({
  "experiment": "chsh-operator",
  "scenario": {
    "a1": {"dim": 2, "entries": [[0,0],[1,0],[0,1],[0,0]]},
    "a2": {"dim": 2, "entries": [[1,0],[0,0],[0,0],[-1,0]]},
    "b1": {"dim": 2, "entries": [[1,0],[0,0],[0,0],[-1,0]]},
    "b2": {"dim": 2, "entries": [[1,0],[0,0],[0,0],[-1,0]]}
  }
})";
  out.close();
  const auto r = run_cli("run chsh-operator --config " + path);
  // Operator deserialization flags it as a config problem before any math.
  CHECK(r.exit_code == 2);
  std::remove(path.c_str());

  // Reachable numeric failure: both parties' settings act on the same
  // tensor factor, so the cross commutators are nonzero and the joint
  // probabilities are undefined.
  const std::string path2 = "/tmp/g2lab_cli_noncomm.json";
  std::ofstream out2(path2);
  out2 << R"({
  "experiment": "chsh-counts",
  "seed": 1,
  "trials_per_setting": 10,
  "scenario": {
    "a1": {"dim": 4, "entries": [[1,0],[0,0],[0,0],[0,0],
                                 [0,0],[1,0],[0,0],[0,0],
                                 [0,0],[0,0],[-1,0],[0,0],
                                 [0,0],[0,0],[0,0],[-1,0]]},
    "a2": {"dim": 4, "entries": [[0,0],[0,0],[1,0],[0,0],
                                 [0,0],[0,0],[0,0],[1,0],
                                 [1,0],[0,0],[0,0],[0,0],
                                 [0,0],[1,0],[0,0],[0,0]]},
    "b1": {"dim": 4, "entries": [[0,0],[0,0],[1,0],[0,0],
                                 [0,0],[0,0],[0,0],[1,0],
                                 [1,0],[0,0],[0,0],[0,0],
                                 [0,0],[1,0],[0,0],[0,0]]},
    "b2": {"dim": 4, "entries": [[1,0],[0,0],[0,0],[0,0],
                                 [0,0],[1,0],[0,0],[0,0],
                                 [0,0],[0,0],[-1,0],[0,0],
                                 [0,0],[0,0],[0,0],[-1,0]]}
  }
})";
  out2.close();
  const auto r2 = run_cli("run chsh-counts --config " + path2);
  CHECK(r2.exit_code == 3);
  std::remove(path2.c_str());
}

TEST_CASE("reruns with one seed are byte-identical") {
  // Same invocation twice onto one path; the first body is captured
  // before the rerun overwrites it.
  const std::string out = "/tmp/g2lab_cli_rerun.json";
  const std::string args =
      "run threshold --trials 20000 --seed 13 --no-timestamp --out " + out;
  CHECK(run_cli(args).exit_code == 0);
  const std::string first = slurp(out);
  CHECK(run_cli(args).exit_code == 0);
  const std::string second = slurp(out);
  REQUIRE_FALSE(first.empty());
  CHECK(first == second);
  std::remove(out.c_str());
}

TEST_CASE("csv format and raw clicks write alongside") {
  const std::string out = "/tmp/g2lab_cli_csv.csv";
  const auto r = run_cli(
      "run grangier --source thermal --trials 5000 --seed 3 --format csv "
      "--raw-clicks --out " + out);
  CHECK(r.exit_code == 0);
  const std::string body = slurp(out);
  CHECK(body.find("model,N,p1,p2,pc,g2,se_g2,alpha,verdict\n") == 0);
  CHECK(body.find("thermal,5000,") != std::string::npos);
  const std::string clicks = slurp(out + ".clicks.csv");
  CHECK(clicks.find("trial,c1,c2\n") == 0);
  std::remove(out.c_str());
  std::remove((out + ".clicks.csv").c_str());
}

TEST_CASE("lhv run prints max S = 1") {
  const auto r = run_cli("run lhv --models 1000 --seed 1 --no-timestamp");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"max_s\": 1.0") != std::string::npos);
}

}  // TEST_SUITE
