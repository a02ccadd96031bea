#include <doctest.h>

#include <random>

#include "../support/oracle.hpp"
#include "mobility/errors.hpp"
#include "mobility/windowing.hpp"

using namespace mobility;

namespace {

EventStream chain(std::size_t iterations) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::vector<Timestamp> times;
  for (std::size_t i = 0; i < iterations; ++i) {
    pairs.emplace_back(i % 5, 5 + i % 3);
    times.push_back(static_cast<Timestamp>(i));
  }
  return EventStream::from_pairs(pairs, times);
}

EventStream abc() { return parse_edge_list("a b 1\nb c 2\na b 2\n", FormatSpec{}); }

}  // namespace

TEST_SUITE("windowing") {

TEST_CASE("span 100 on the event axis") {
  const WindowSchedule s = paper_schedule(chain(100), TimeAxis::kEventIteration);
  REQUIRE(s.pairs.size() == 9);
  for (std::size_t k = 0; k < 9; ++k) {
    const auto lo = static_cast<std::int64_t>(10 * k);
    CHECK(s.pairs[k].q() == Rational(lo));
    CHECK(s.pairs[k].r() == Rational(lo + 10));
    CHECK(s.pairs[k].s() == Rational(lo + 20));
  }
  CHECK(s.pairs.back().s() == Rational(100));
}

TEST_CASE("span 10 gives unit sub-windows") {
  const WindowSchedule s = paper_schedule(chain(10), TimeAxis::kEventIteration);
  REQUIRE(s.pairs.size() == 9);
  for (const auto& p : s.pairs) {
    CHECK(p.first.length() == Rational(1));
    CHECK(p.second.length() == Rational(1));
  }
}

TEST_CASE("span below 10 is rejected") {
  CHECK_THROWS_AS(paper_schedule(chain(9), TimeAxis::kEventIteration), InputError);
  CHECK_THROWS_AS(paper_schedule(abc(), TimeAxis::kEventIteration), InputError);
  CHECK_THROWS_AS(paper_schedule(abc(), TimeAxis::kTimestamp), InputError);
}

TEST_CASE("span 45 uses exact rational bounds") {
  const EventStream st = chain(45);
  const WindowSchedule s = paper_schedule(st, TimeAxis::kEventIteration);
  REQUIRE(s.pairs.size() == 9);
  CHECK(s.pairs[0].r() == Rational(9, 2));
  CHECK(s.pairs[8].s() == Rational(45));
  for (const auto& p : s.pairs) {
    CHECK(p.second.lo == p.first.hi);
    CHECK(p.first.length() == p.second.length());
    const WindowSnapshot whole = snapshot(st, {p.q(), p.s()}, s.axis);
    const WindowSnapshot a = snapshot(st, p.first, s.axis);
    const WindowSnapshot b = snapshot(st, p.second, s.axis);
    CHECK(whole.event_count() == a.event_count() + b.event_count());
    std::size_t expect_a = 0, expect_b = 0;
    for (std::size_t i = 0; i < st.event_count(); ++i) {
      const auto x = oracle::axis_value(st, i, s.axis);
      const bool in_a = oracle::in_window(x, p.first.lo, p.first.hi);
      const bool in_b = oracle::in_window(x, p.second.lo, p.second.hi);
      CHECK_FALSE((in_a && in_b));
      expect_a += in_a;
      expect_b += in_b;
    }
    CHECK(a.event_count() == expect_a);
    CHECK(b.event_count() == expect_b);
  }
}

TEST_CASE("timestamp-axis snapshots") {
  const EventStream s = abc();
  const WindowSnapshot w12 = snapshot(s, {Rational(1), Rational(2)}, TimeAxis::kTimestamp);
  CHECK(w12.node_count() == 2);
  CHECK(w12.edge_count() == 1);
  const NodeId a = *s.labels().find("a"), b = *s.labels().find("b"), c = *s.labels().find("c");
  CHECK(w12.multiplicity(a, b) == 1);
  CHECK(w12.multiplicity(b, c) == 0);

  const WindowSnapshot w13 = snapshot(s, {Rational(1), Rational(3)}, TimeAxis::kTimestamp);
  CHECK(w13.edge_count() == 2);
  CHECK(w13.multiplicity(a, b) == 2);
  CHECK(w13.multiplicity(b, c) == 1);
  CHECK(w13.node_count() == 3);

  const WindowSnapshot w59 = snapshot(s, {Rational(5), Rational(9)}, TimeAxis::kTimestamp);
  CHECK(w59.empty());
  CHECK(w59.edge_count() == 0);
}

TEST_CASE("full-axis snapshot equals the static aggregate") {
  std::mt19937_64 rng(5);
  const EventStream s = oracle::random_stream(rng, 25, 400, 80);
  for (const TimeAxis axis : {TimeAxis::kEventIteration, TimeAxis::kTimestamp}) {
    const WindowSnapshot full = snapshot(s, axis_extent(s, axis), axis);
    CHECK(full.event_count() == s.event_count());
    std::map<NodePair, std::uint32_t> counts;
    for (const auto& e : s.events()) ++counts[{e.u, e.v}];
    const auto edges = full.edges();
    CHECK(edges.size() == counts.size());
    for (const auto& [pair, m] : edges) CHECK(counts[pair] == m);
  }
}

TEST_CASE("snapshot adjacency is symmetric with no isolated nodes") {
  std::mt19937_64 rng(6);
  const EventStream s = oracle::random_stream(rng, 30, 300, 50);
  const WindowSnapshot w = snapshot(s, {Rational(10), Rational(31)}, TimeAxis::kTimestamp);
  for (std::size_t i = 0; i < w.node_count(); ++i) {
    CHECK(w.distinct_degree(i) >= 1);
    const NodeId n = w.active_nodes()[i];
    for (const NodeId m : w.neighbours(i)) {
      CHECK(m != n);
      CHECK(w.multiplicity(m, n) == w.multiplicity(n, m));
      CHECK(w.multiplicity(n, m) >= 1);
    }
  }
}

TEST_CASE("custom schedules") {
  const WindowTriple t = parse_window_triple("0:5:10");
  CHECK(t.r == Rational(5));
  const WindowTriple d = parse_window_triple("0.5:1:1.5", 2);
  CHECK(d.q == Rational(50));
  CHECK(d.s == Rational(150));
  const std::vector<WindowTriple> ok{t, parse_window_triple("10:20:30")};
  const WindowSchedule s = custom_schedule(ok, TimeAxis::kTimestamp);
  CHECK(s.pairs.size() == 2);
  const std::vector<WindowTriple> unequal{parse_window_triple("0:5:11")};
  CHECK_THROWS_AS(custom_schedule(unequal, TimeAxis::kTimestamp), ConfigError);
  const std::vector<WindowTriple> reversed{{Rational(10), Rational(5), Rational(0)}};
  CHECK_THROWS_AS(custom_schedule(reversed, TimeAxis::kTimestamp), ConfigError);
  CHECK_THROWS_AS(parse_window_triple("5:0:-5"), ConfigError);
  CHECK_THROWS_AS(parse_window_triple("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_window_triple("a:b:c"), ConfigError);
  CHECK_THROWS_AS(parse_time_axis("hours"), ConfigError);
}

}  // TEST_SUITE
