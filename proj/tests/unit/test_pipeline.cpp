#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "../support/oracle.hpp"
#include "mobility/errors.hpp"
#include "mobility/io.hpp"
#include "mobility/pipeline.hpp"

using namespace mobility;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("mobility_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& body) const {
    std::ofstream(path / name) << body;
    return (path / name).string();
  }
};

std::string random_edge_list(std::uint64_t seed, std::size_t nodes, std::size_t events) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> node(0, nodes - 1);
  std::ostringstream out;
  for (std::size_t t = 0; t < events;) {
    const auto a = node(rng), b = node(rng);
    if (a == b) continue;
    out << a << ' ' << b << ' ' << t << '\n';
    ++t;
  }
  return out.str();
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config defaults and parsing") {
  const RunConfig d = parse_config("");
  CHECK(d.inputs.empty());
  CHECK(d.axis == TimeAxis::kEventIteration);
  CHECK(d.degree == DegreeMode::kBinary);
  CHECK(d.schedule == ScheduleKind::kPaper);
  CHECK(d.workers == 1);

  const RunConfig c = parse_config(R"(# corpus
input = data/a.tsv
input = "data/b#2.txt"   # quoted keeps the hash
format = time,src,dst
delimiter = tab
axis = time
degree = multiplicity
windows = custom
window = 0:5:10
window = 0.5:1:1.5
output_dir = out
rng_seed = 7
groups = meta.csv
group_by = link_creation
gini = full
workers = 3
)");
  REQUIRE(c.inputs.size() == 2);
  CHECK(c.inputs[0] == NetworkInput{"a", "data/a.tsv"});
  CHECK(c.inputs[1].path == "data/b#2.txt");
  CHECK(c.format.time_column == 0);
  CHECK(c.format.source_column == 1);
  CHECK(c.format.delimiter == Delimiter::kTab);
  CHECK(c.axis == TimeAxis::kTimestamp);
  CHECK(c.degree == DegreeMode::kMultiplicity);
  CHECK(c.windows.size() == 2);
  CHECK(c.rng_seed == 7);
  CHECK(c.group_by == GroupBy::kLinkCreation);
  CHECK(c.gini == GiniSummary::kFullNetwork);
  CHECK(c.workers == 3);
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(parse_config(serialize_config(d)) == d);
}

TEST_CASE("config errors name the line") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("input = a\ncolour = red\n").starts_with("line 2:"));
  CHECK(message("no equals sign").starts_with("line 1:"));
  CHECK(message("\n\naxis = sideways").starts_with("line 3:"));
  CHECK(message("workers = -1").starts_with("line 1:"));
  CHECK(message("window = 3:2:1x").starts_with("line 1:"));
  CHECK(message("input = \"unterminated").starts_with("line 1:"));
}

TEST_CASE("validation") {
  TempDir dir("validate");
  const auto a = dir.file("a.txt", random_edge_list(1, 10, 40));
  RunConfig c;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.inputs = {{"", a}};
  CHECK(validate_config(c).inputs[0].id == "a");
  c.inputs = {{"", a}, {"", a}};
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.inputs = {{"", (dir.path / "missing.txt").string()}};
  CHECK_THROWS_AS(validate_config(c), InputError);
  c.inputs = {{"", a}};
  c.schedule = ScheduleKind::kCustom;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.schedule = ScheduleKind::kPaper;
  c.workers = 0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  // A single timestamp spans one tick on the time axis.
  const auto flat = dir.file("flat.txt", "1 2 5\n2 3 5\n3 4 5\n");
  RunConfig t;
  t.inputs = {{"", flat}};
  t.axis = TimeAxis::kTimestamp;
  CHECK_NOTHROW(validate_config(t));
  CHECK_THROWS_AS(validate_config(t, {.check_files = true, .probe_inputs = true}), InputError);
}

TEST_CASE("group metadata") {
  TempDir dir("groups");
  const auto good = dir.file("g.csv", "network,collection,link_creation\na,social,human\nb,tech,auto\n");
  const auto m = read_group_metadata(good);
  CHECK(m.at("b").collection == "tech");
  CHECK(m.at("a").link_creation == "human");
  CHECK_THROWS_AS(read_group_metadata(dir.file("bad.csv", "network,collection\na,x\n")), InputError);
  CHECK_THROWS_AS(read_group_metadata(dir.file("dup.csv",
                                               "network,collection,link_creation\na,x,y\na,x,y\n")),
                  ParseError);
}

TEST_CASE("single network corpus reproduces its records with zero error") {
  TempDir dir("single");
  RunConfig c;
  c.inputs = {{"", dir.file("net.txt", random_edge_list(2, 30, 300))}};
  c.output_dir = (dir.path / "out").string();
  const CorpusResult r = run_corpus(validate_config(c));
  REQUIRE(r.networks.size() == 1);
  REQUIRE_FALSE(r.networks[0].error);
  CHECK(r.networks[0].group == "ungrouped");
  CHECK(r.aggregates.size() == kPaperPairCount * kStatisticCount);
  for (const auto& cell : r.aggregates) {
    CHECK(cell.mean == r.networks[0].records[cell.pair_index][cell.statistic]);
    CHECK(cell.sem == 0.0);
  }

  const std::string manifest = write_corpus_outputs(r, c);
  CHECK(fs::exists(dir.path / "out" / "net.taxonomy.csv"));
  CHECK(fs::exists(dir.path / "out" / "ungrouped.aggregate.csv"));
  const auto j = nlohmann::json::parse(read_file(manifest));
  CHECK(j["networks"].size() == 1);
  CHECK(j["networks"][0]["status"] == "ok");
  CHECK(j["config"]["inputs"].size() == 1);
  const auto rows = parse_taxonomy_csv(read_file((dir.path / "out" / "net.taxonomy.csv").string()));
  REQUIRE(rows.size() == kPaperPairCount);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    for (const Statistic s : kAllStatistics) {
      CHECK(rows[p].values[static_cast<std::size_t>(s)] == r.networks[0].records[p][s]);
    }
  }
}

TEST_CASE("identical networks aggregate with zero error") {
  TempDir dir("twins");
  const std::string body = random_edge_list(3, 25, 200);
  RunConfig c;
  c.inputs = {{"", dir.file("x.txt", body)}, {"", dir.file("y.txt", body)}};
  c.workers = 2;
  const CorpusResult r = run_corpus(validate_config(c));
  for (const auto& cell : r.aggregates) {
    CHECK(cell.sem == 0.0);
    if (cell.mean) CHECK(cell.count == 2);
  }
}

TEST_CASE("aggregation matches a hand computation") {
  std::vector<NetworkResult> nets(4);
  const double values[] = {0.1, 0.4, 0.7};
  for (std::size_t i = 0; i < 3; ++i) {
    nets[i].id = "n" + std::to_string(i);
    nets[i].group = "g";
    nets[i].records.resize(1);
    nets[i].records[0][Statistic::kMobility] = values[i];
  }
  nets[2].records[0][Statistic::kCommunity] = 0.5;
  nets[3].id = "broken";
  nets[3].group = "g";
  nets[3].error = "bad input";
  const auto cells = aggregate_groups(nets);
  REQUIRE(cells.size() == kStatisticCount);
  CHECK(cells[0].statistic == Statistic::kMobility);
  CHECK(*cells[0].mean == doctest::Approx(0.4));
  // sample sd 0.3, over sqrt(3)
  CHECK(cells[0].sem == doctest::Approx(0.3 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(cells[0].count == 3);
  const auto& community = cells[static_cast<std::size_t>(Statistic::kCommunity)];
  CHECK(community.mean == 0.5);
  CHECK(community.sem == 0.0);
  CHECK(community.count == 1);
  CHECK_FALSE(cells[1].mean.has_value());
}

TEST_CASE("aggregates agree with a naive recomputation") {
  TempDir dir("naive");
  RunConfig c;
  for (int i = 0; i < 4; ++i) {
    c.inputs.push_back({"", dir.file("n" + std::to_string(i) + ".txt",
                                     random_edge_list(10 + i, 20 + 5 * i, 150 + 40 * i))});
  }
  c.groups_path = dir.file("meta.csv",
                           "network,collection,link_creation\nn0,a,h\nn1,a,h\nn2,b,h\nn3,b,m\n");
  c.degree = DegreeMode::kMultiplicity;
  const RunConfig v = validate_config(c);
  const CorpusResult r = run_corpus(v);
  std::map<std::string, std::vector<std::string>> members{{"a", {"n0", "n1"}}, {"b", {"n2", "n3"}}};
  for (const auto& cell : r.aggregates) {
    std::vector<double> xs;
    for (const auto& id : members.at(cell.group)) {
      const auto s = read_edge_list((dir.path / (id + ".txt")).string(), v.format);
      const auto sched = paper_schedule(s, v.axis);
      const auto f = oracle::frame(s, v.axis, sched.pairs[cell.pair_index], v.degree);
      if (const auto x = oracle::statistics(f)[static_cast<std::size_t>(cell.statistic)]) {
        xs.push_back(*x);
      }
    }
    REQUIRE(cell.count == xs.size());
    if (xs.empty()) continue;
    double m = 0;
    for (const double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    CHECK(std::abs(*cell.mean - m) < 1e-12);
  }
  RunConfig by_link = v;
  by_link.group_by = GroupBy::kLinkCreation;
  const CorpusResult rl = run_corpus(by_link);
  CHECK(rl.networks[2].group == "h");
  CHECK(rl.networks[3].group == "m");
}

TEST_CASE("one failing network does not stop the corpus") {
  TempDir dir("failure");
  RunConfig c;
  c.inputs = {{"", dir.file("good.txt", random_edge_list(4, 20, 120))},
              {"", dir.file("tiny.txt", "1 2 0\n2 3 1\n3 4 2\n")},
              {"", dir.file("garbled.txt", "1 2 zero\n")}};
  c.output_dir = (dir.path / "out").string();
  const CorpusResult r = run_corpus(validate_config(c));
  CHECK_FALSE(r.networks[0].error);
  CHECK(r.networks[1].error);
  CHECK(r.networks[2].error);
  CHECK(r.aggregates.size() == kPaperPairCount * kStatisticCount);
  const auto j = nlohmann::json::parse(read_file(write_corpus_outputs(r, c)));
  CHECK(j["networks"][1]["status"] == "failed");
  CHECK(j["networks"][2]["error"].get<std::string>().find("line 1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "out" / "tiny.taxonomy.csv"));
}

TEST_CASE("gini report covers every pair span") {
  std::mt19937_64 rng(6);
  const EventStream s = oracle::random_stream(rng, 30, 400, 1000);
  const auto sched = paper_schedule(s, TimeAxis::kEventIteration);
  const GiniReport g = gini_report(s, sched, DegreeMode::kBinary);
  REQUIRE(g.values.size() == kPaperPairCount);
  double sum = 0;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    CHECK(g.windows[k] == Window{sched.pairs[k].q(), sched.pairs[k].s()});
    REQUIRE(g.values[k]);
    CHECK(*g.values[k] >= 0.0);
    CHECK(*g.values[k] < 1.0);
    sum += *g.values[k];
  }
  CHECK(*g.window_mean == doctest::Approx(sum / 9.0).epsilon(1e-12));
  REQUIRE(g.full_network);
}

}  // TEST_SUITE
