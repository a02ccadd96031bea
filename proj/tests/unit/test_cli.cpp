#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mobility/cli.hpp"
#include "mobility/event_stream.hpp"

using namespace mobility;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mobility");
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

struct Sandbox {
  fs::path dir;
  Sandbox() : dir(fs::temp_directory_path() / "mobility_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> node(0, 39);
    std::ofstream f(dir / "net.txt");
    for (int t = 0; t < 400;) {
      const int a = node(rng), b = node(rng);
      if (a == b) continue;
      f << a << ' ' << b << ' ' << t++ << '\n';
    }
    std::ofstream(dir / "toy.txt") << "1 2 0\n2 3 1\n1 3 2\n";
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

const std::vector<std::string> kSmallGrowth{"--seed-nodes", "30", "--slices", "2",
                                            "--slice-nodes", "10"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

struct ScopedEnv {
  std::string name;
  ScopedEnv(const char* n, const std::string& v) : name(n) { ::setenv(n, v.c_str(), 1); }
  ~ScopedEnv() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors and help") {
  CHECK(run({}).code == 1);
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"frobnicate"}).code == 1);
  for (const char* sub : {"taxonomy", "generate", "optimize", "gini", "pca", "corpus"}) {
    const Result r = run({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--json") != std::string::npos);
  }
  CHECK(run({"taxonomy", "--bogus"}).code == 1);
  CHECK(run({"taxonomy"}).code == 1);
  CHECK(run({"generate", "--model", "nonsense"}).code == 1);
  CHECK(run({"optimize", "--direction", "up"}).code == 1);
}

TEST_CASE("input problems exit with code 2") {
  Sandbox box;
  const Result toy = run({"taxonomy", "-i", box.path("toy.txt")});
  CHECK(toy.code == 2);
  CHECK(toy.err.find("error:") == 0);
  CHECK(run({"taxonomy", "-i", box.path("absent.txt")}).code == 2);
  std::ofstream(box.dir / "bad.txt") << "1 2 3\n4 5 x\n";
  const Result bad = run({"taxonomy", "-i", box.path("bad.txt")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("taxonomy csv and json agree") {
  Sandbox box;
  const Result csv = run({"taxonomy", "-i", box.path("net.txt")});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.starts_with("pair_index,q,r,s,n_consistent,mobility,"));
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 10);
  const Result js = run({"taxonomy", "-i", box.path("net.txt"), "--json"});
  REQUIRE(js.code == 0);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["command"] == "taxonomy");
  CHECK(doc["records"].size() == 9);
  CHECK(doc["stats"]["events"] == 400);
  CHECK(run({"taxonomy", "-i", box.path("net.txt"), "--workers", "3"}).out == csv.out);
}

TEST_CASE("generate is reproducible") {
  Sandbox box;
  const auto args = with({"generate", "--model", "preferential_attachment", "--rng-seed", "4"}, kSmallGrowth);
  const Result a = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out.starts_with("src,dst,time\n"));
  CHECK(run(args).out == a.out);
  const Result b = run(with({"generate", "--model", "preferential_attachment", "--rng-seed", "5"}, kSmallGrowth));
  CHECK(b.out != a.out);
  const Result j = run(with(args, {"--json"}));
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["nodes"] == 50);
  CHECK(doc["events"].size() == doc["edges"]);
}

TEST_CASE("optimize writes traces, summary and manifest") {
  Sandbox box;
  const std::string out = box.path("opt");
  const Result r = run(with({"optimize", "--runs", "2", "--statistic", "community",
                             "--direction", "min", "--models", "random,preferential_attachment,equality",
                             "--out-dir", out},
                            kSmallGrowth));
  REQUIRE(r.code == 0);
  CHECK(r.out.starts_with("slice,mobility_mean,mobility_std,mobility_count"));
  for (const char* f : {"run_0.trace.csv", "run_1.trace.csv", "summary.csv", "manifest.json"}) {
    CHECK(fs::exists(fs::path(out) / f));
  }
  const std::string trace = read_file((fs::path(out) / "run_0.trace.csv").string());
  CHECK(trace.starts_with("slice,chosen_model,"));
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 3);
  const auto manifest = nlohmann::json::parse(read_file((fs::path(out) / "manifest.json").string()));
  CHECK(manifest["config"]["models"].size() == 3);
  CHECK(manifest["files"].size() == 3);
  CHECK(read_file((fs::path(out) / "summary.csv").string()) == r.out);
}

TEST_CASE("environment overrides sit below flags") {
  Sandbox box;
  {
    ScopedEnv e("MOBILITY_OUT_DIR", box.path("from_env"));
    REQUIRE(run(with({"optimize", "--models", "random"}, kSmallGrowth)).code == 0);
    CHECK(fs::exists(box.dir / "from_env" / "summary.csv"));
    REQUIRE(run(with({"optimize", "--models", "random", "--out-dir", box.path("flag")},
                     kSmallGrowth)).code == 0);
    CHECK(fs::exists(box.dir / "flag" / "summary.csv"));
  }
  {
    ScopedEnv e("MOBILITY_WORKERS", "0");
    CHECK(run({"taxonomy", "-i", box.path("net.txt")}).code == 1);
    CHECK(run({"taxonomy", "-i", box.path("net.txt"), "--workers", "2"}).code == 0);
  }
  {
    ScopedEnv e("MOBILITY_WORKERS", "2");
    const Result j = run(with({"optimize", "--models", "random", "--json",
                               "--out-dir", box.path("w")}, kSmallGrowth));
    REQUIRE(j.code == 0);
    CHECK(nlohmann::json::parse(j.out)["config"]["workers"] == 2);
  }
}

TEST_CASE("gini, pca and corpus commands") {
  Sandbox box;
  const Result g = run({"gini", "-i", box.path("net.txt")});
  REQUIRE(g.code == 0);
  CHECK(g.out.starts_with("window,lo,hi,gini\n"));
  CHECK(g.out.find("\nfull,") != std::string::npos);

  // Three networks: corpus, then PCA on the resulting taxonomy files.
  std::ofstream cfg(box.dir / "run.cfg");
  for (int k = 0; k < 3; ++k) {
    std::mt19937_64 rng(100 + k);
    std::uniform_int_distribution<int> node(0, 29 + k * 5);
    std::ofstream f(box.dir / ("n" + std::to_string(k) + ".txt"));
    for (int t = 0; t < 300 + 50 * k;) {
      const int a = node(rng), b = node(rng);
      if (a == b) continue;
      f << a << ' ' << b << ' ' << t++ << '\n';
    }
    cfg << "input = " << box.path("n" + std::to_string(k) + ".txt") << '\n';
  }
  cfg << "output_dir = " << box.path("corpus") << '\n';
  cfg.close();
  const Result c = run({"corpus", "-c", box.path("run.cfg")});
  REQUIRE(c.code == 0);
  CHECK(fs::exists(box.dir / "corpus" / "manifest.json"));
  CHECK(fs::exists(box.dir / "corpus" / "ungrouped.aggregate.csv"));

  std::vector<std::string> pca_args{"pca", "--out-dir", box.path("pca")};
  for (int k = 0; k < 3; ++k) {
    pca_args.push_back("--taxonomy");
    pca_args.push_back(box.path("corpus/n" + std::to_string(k) + ".taxonomy.csv"));
  }
  const Result p = run(pca_args);
  REQUIRE(p.code == 0);
  for (const char* f : {"components.csv", "points.csv", "ellipses.csv", "manifest.json"}) {
    CHECK(fs::exists(box.dir / "pca" / f));
  }
  CHECK(run({"corpus", "-c", box.path("missing.cfg")}).code == 2);
}

#ifdef MOBILITY_BINARY
TEST_CASE("installed binary reports exit codes") {
  Sandbox box;
  const std::string bin = MOBILITY_BINARY;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("--version") == 0);
  CHECK(status("taxonomy -i " + box.path("toy.txt")) == 2);
  CHECK(status("taxonomy --nope") == 1);
}
#endif

}  // TEST_SUITE
