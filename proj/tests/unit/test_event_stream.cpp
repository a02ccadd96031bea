#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <zlib.h>

#include "mobility/errors.hpp"
#include "mobility/event_stream.hpp"

using namespace mobility;

namespace {

FormatSpec ws() { return FormatSpec{}; }

std::string label_of(const EventStream& s, NodeId id) { return s.labels().label(id); }

}  // namespace

TEST_SUITE("event_stream") {

TEST_CASE("three events, two iterations") {
  const EventStream s = parse_edge_list("a b 1\nb c 2\na b 2\n", ws());
  CHECK(s.event_count() == 3);
  CHECK(s.node_count() == 3);
  CHECK(s.iteration_count() == 2);
  const std::vector<std::uint32_t> it(s.iterations().begin(), s.iterations().end());
  CHECK(it == std::vector<std::uint32_t>{0, 1, 1});

  const StreamStats st = stream_stats(s);
  CHECK(st.nodes == 3);
  CHECK(st.events == 3);
  CHECK(st.iterations == 2);
  CHECK(st.t_min == 1);
  CHECK(st.t_max == 2);
}

TEST_CASE("single event") {
  const StreamStats st = stream_stats(parse_edge_list("x y 7", ws()));
  CHECK(st.nodes == 2);
  CHECK(st.events == 1);
  CHECK(st.iterations == 1);
}

TEST_CASE("self-loops are dropped and counted") {
  const EventStream s = parse_edge_list("a b 1\na a 5\nb c 6\n", ws());
  CHECK(s.event_count() == 2);
  CHECK(s.self_loops_dropped() == 1);
  CHECK(stream_stats(s).self_loops_dropped == 1);
}

TEST_CASE("events are sorted by time") {
  const EventStream s = parse_edge_list("x y 9\nx z 3\n", ws());
  REQUIRE(s.event_count() == 2);
  CHECK(s.events()[0].t == 3);
  CHECK(s.events()[1].t == 9);
  const auto& e = s.events()[0];
  const std::set<std::string> first{label_of(s, e.u), label_of(s, e.v)};
  CHECK(first == std::set<std::string>{"x", "z"});
}

TEST_CASE("duplicate events at one timestamp are kept") {
  const std::string text = "a b 1\na b 1\nb a 1\nc d 2\n";
  const EventStream s = parse_edge_list(text, ws());
  const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  CHECK(s.event_count() == lines);
  CHECK(s.iteration_count() == 2);
}

TEST_CASE("canonical orientation u < v") {
  const EventStream s = parse_edge_list("b a 1\nc a 2\nc b 3\n", ws());
  for (const auto& e : s.events()) CHECK(e.u < e.v);
}

TEST_CASE("labels round-trip and ids are dense") {
  const EventStream s = parse_edge_list("n1 n2 1\nn3 n1 2\nn4 n5 3\nn2 n5 3\n", ws());
  CHECK(s.node_count() == 5);
  std::set<std::string> seen;
  for (NodeId id = 0; id < s.node_count(); ++id) {
    const std::string& l = s.labels().label(id);
    CHECK(s.labels().find(l) == id);
    seen.insert(l);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("permuting lines with distinct timestamps gives the same stream") {
  std::vector<std::string> lines;
  for (int t = 0; t < 60; ++t) {
    lines.push_back("v" + std::to_string(t % 7) + " w" + std::to_string((t * 5) % 11) + " " +
                    std::to_string(1000 - t * 3));
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& l : v) out += l + "\n";
    return out;
  };
  const EventStream base = parse_edge_list(join(lines), ws());
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::shuffle(lines.begin(), lines.end(), rng);
    CHECK(parse_edge_list(join(lines), ws()) == base);
  }
}

TEST_CASE("iteration count equals distinct timestamps") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> node(0, 20), time(0, 40);
  std::string text;
  std::set<int> times;
  for (int i = 0; i < 300; ++i) {
    const int a = node(rng), b = node(rng), t = time(rng);
    if (a == b) continue;
    text += std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(t) + "\n";
    times.insert(t);
  }
  const EventStream s = parse_edge_list(text, ws());
  CHECK(s.iteration_count() == times.size());
  for (std::size_t i = 1; i < s.event_count(); ++i) {
    CHECK(s.events()[i - 1].t <= s.events()[i].t);
    const auto step = s.iterations()[i] - s.iterations()[i - 1];
    CHECK(step == (s.events()[i].t == s.events()[i - 1].t ? 0u : 1u));
  }
}

TEST_CASE("format, delimiter, comment and header options") {
  FormatSpec f = FormatSpec::from_columns("time,weight,src,dst");
  f.delimiter = Delimiter::kComma;
  f.has_header = true;
  f.comment_prefix = "%";
  const EventStream s =
      parse_edge_list("t,w,a,b\n% note\n5,0.3,x,y\n\n2,1,y,z\n", f);
  CHECK(s.event_count() == 2);
  CHECK(s.events()[0].t == 2);
  CHECK(f.columns() == "time,_,src,dst");

  FormatSpec tab;
  tab.delimiter = Delimiter::kTab;
  CHECK(parse_edge_list("a\tb\t1\n", tab).event_count() == 1);
}

TEST_CASE("fractional timestamps become fixed point") {
  const EventStream s = parse_edge_list("a b 1.5\nb c 2\nc d 0.25\n", ws());
  CHECK(s.time_decimals() == 2);
  CHECK(s.events()[0].t == 25);
  CHECK(s.events()[1].t == 150);
  CHECK(s.events()[2].t == 200);
  CHECK(format_timestamp(150, 2) == "1.5");
  CHECK(format_timestamp(200, 2) == "2");
}

TEST_CASE("malformed input carries the line number") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_edge_list(text, FormatSpec{});
    } catch (const ParseError& e) {
      return e.line();
    }
    return 9999;
  };
  CHECK(line_of("a b 1\nb c x\n") == 2);
  CHECK(line_of("a b 1\n# c\nb c\n") == 3);
  CHECK(line_of("a b -1\n") == 1);
  CHECK_THROWS_AS(parse_edge_list("", FormatSpec{}), ParseError);
  CHECK_THROWS_AS(parse_edge_list("# only a comment\n", FormatSpec{}), ParseError);
  CHECK_THROWS_AS(parse_edge_list("a a 1\n", FormatSpec{}), ParseError);
}

TEST_CASE("bad format specs") {
  CHECK_THROWS_AS(FormatSpec::from_columns("src,dst"), ConfigError);
  CHECK_THROWS_AS(FormatSpec::from_columns("src,src,time"), ConfigError);
  CHECK_THROWS_AS(parse_delimiter("semicolon"), ConfigError);
}

TEST_CASE("gzip input is inflated transparently") {
  const auto dir = std::filesystem::temp_directory_path() / "mobility_gz_test";
  std::filesystem::create_directories(dir);
  const std::string plain = "a b 1\nb c 2\na c 3\n";
  const auto gz = (dir / "edges.txt.gz").string();
  gzFile f = gzopen(gz.c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, plain.data(), static_cast<unsigned>(plain.size()));
  gzclose(f);
  const auto txt = (dir / "edges.txt").string();
  std::ofstream(txt) << plain;
  CHECK(read_edge_list(gz, FormatSpec{}) == read_edge_list(txt, FormatSpec{}));
  CHECK_THROWS_AS(read_edge_list((dir / "missing").string(), FormatSpec{}), InputError);
}

}  // TEST_SUITE
