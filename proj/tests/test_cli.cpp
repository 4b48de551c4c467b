#include <sys/wait.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "edgesnn/cli/commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using edgesnn::cli::run_cli;

namespace {

const fs::path kReference = fs::path(EDGESNN_SOURCE_DIR) / "scenarios" / "reference.json";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("edgesnn_cli_" + std::to_string(std::rand()) + "_" +
                                       std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  // Reference scenario shortened to `duration` seconds, without a tree artifact.
  fs::path scenario(double duration, const std::string& name = "short.json") const {
    auto j = nlohmann::json::parse(slurp(kReference));
    j["duration_s"] = duration;
    if (j.contains("policy")) j["policy"].erase("tree_path");
    const auto p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<fs::path> files_in(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> v;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) v.push_back(e.path());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"run"}).code == 2);
  CHECK(cli({"run", "--scenario", kReference.string(), "--bogus"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"run", "--help"}).code == 0);
}

TEST_CASE("nonexistent scenario exits 2 and names the path") {
  const auto r = cli({"run", "--scenario", "/no/such/scenario.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/no/such/scenario.json") != std::string::npos);
}

TEST_CASE("invalid choices exit 2") {
  Sandbox sb;
  const auto s = sb.scenario(50.0).string();
  CHECK(cli({"run", "--scenario", s, "--policy", "dqn", "--out", sb.dir.string()}).code == 2);
  CHECK(cli({"run", "--scenario", s, "--load", "extreme", "--out", sb.dir.string()}).code == 2);
  CHECK(cli({"run", "--scenario", s, "--policy", "tree", "--tree", "/no/tree.json"}).code == 2);
}

TEST_CASE("run writes reports and is deterministic") {
  Sandbox sb;
  const auto s = sb.scenario(200.0).string();
  const auto a = sb.dir / "a", b = sb.dir / "b";
  const auto r1 = cli({"run", "--scenario", s, "--policy", "round_robin", "--seed", "1", "--out", a.string()});
  REQUIRE(r1.code == 0);
  const auto r2 = cli({"run", "--scenario", s, "--policy", "round_robin", "--seed", "1", "--out", b.string()});
  REQUIRE(r2.code == 0);
  CHECK(r1.out == r2.out);
  const auto ja = files_in(a, ".json"), jb = files_in(b, ".json");
  REQUIRE(ja.size() == 1);
  REQUIRE(files_in(a, ".csv").size() == 1);
  CHECK(ja[0].filename() == jb[0].filename());
  CHECK(slurp(ja[0]) == slurp(jb[0]));
  CHECK(slurp(files_in(a, ".csv")[0]) == slurp(files_in(b, ".csv")[0]));
  const auto j = nlohmann::json::parse(slurp(ja[0]));
  CHECK(j["policy"] == "round_robin");
  CHECK(j["seed"] == 1);
  CHECK(j["spike_total"] == 0);
}

TEST_CASE("snn run spends spikes") {
  Sandbox sb;
  const auto r = cli({"run", "--scenario", sb.scenario(200.0).string(), "--policy", "snn", "--out", sb.dir.string()});
  REQUIRE(r.code == 0);
  const auto files = files_in(sb.dir, ".json");
  std::size_t checked = 0;
  for (const auto& f : files) {
    if (f.filename().string().find("_snn_") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(slurp(f));
    CHECK(j["spike_total"].get<std::int64_t>() > 0);
    ++checked;
  }
  CHECK(checked == 1);
}

TEST_CASE("train-tree writes a bounded, reproducible tree") {
  Sandbox sb;
  const auto s = sb.scenario(600.0).string();
  const auto a = sb.dir / "a", b = sb.dir / "b";
  const auto r = cli({"train-tree", "--scenario", s, "--out", a.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("training_accuracy=") != std::string::npos);
  REQUIRE(cli({"train-tree", "--scenario", s, "--out", b.string()}).code == 0);
  const auto ta = slurp(a / "tree.json");
  CHECK(ta == slurp(b / "tree.json"));
  const auto j = nlohmann::json::parse(ta);
  CHECK(j["max_depth"] == 4);

  // The artifact drives the tree policy.
  const auto run = cli({"run", "--scenario", s, "--policy", "tree", "--tree", (a / "tree.json").string(), "--out",
                        (sb.dir / "r").string()});
  CHECK(run.code == 0);
  CHECK(run.err.find("warning") == std::string::npos);
}

TEST_CASE("empty calibration exits 2") {
  Sandbox sb;
  const auto r = cli({"train-tree", "--scenario", sb.scenario(0.001).string(), "--out", sb.dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("no decisions") != std::string::npos);
}

TEST_CASE("compare writes every table") {
  Sandbox sb;
  const auto s = sb.scenario(150.0).string();
  const auto out = sb.dir / "cmp";
  const auto r = cli({"compare", "--scenario", s, "--seeds", "2", "--jobs", "2", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning: no tree artifact") != std::string::npos);
  for (const char* f : {"runs.csv", "success_matrix.csv", "success_matrix_detail.csv", "latency_vs_load.csv",
                        "energy_per_node.csv", "deltas.csv", "summary.txt"})
    CHECK(fs::exists(out / f));
  CHECK(files_in(out / "runs", ".json").size() == 18);
  const auto matrix = slurp(out / "success_matrix.csv");
  CHECK(matrix.find("SNN") != std::string::npos);
  CHECK(matrix.find("ML-Based") != std::string::npos);
  CHECK(matrix.find("Heuristic") != std::string::npos);
  CHECK(matrix.find("\nLow,") != std::string::npos);
  CHECK(matrix.find("\nMedium,") != std::string::npos);
  CHECK(matrix.find("\nHigh,") != std::string::npos);
  const auto detail = slurp(out / "success_matrix_detail.csv");
  CHECK(detail.find("min") != std::string::npos);
  CHECK(detail.find("max") != std::string::npos);
}

TEST_CASE("sweep runs a single policy") {
  Sandbox sb;
  const auto out = sb.dir / "sw";
  const auto r = cli({"sweep", "--scenario", sb.scenario(100.0).string(), "--policy", "oracle", "--seeds", "2",
                      "--load", "high", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(files_in(out / "runs", ".json").size() == 2);
}

TEST_CASE("installed binary maps errors to exit codes") {
  const std::string tool = EDGESNN_TOOL;
  const int status = std::system((tool + " run --scenario /no/such/file.json > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 2);
  const int help = std::system((tool + " --help > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(help));
  CHECK(WEXITSTATUS(help) == 0);
}
