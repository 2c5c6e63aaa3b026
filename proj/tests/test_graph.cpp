#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ssm/graph.hpp"
#include "ssm/graph_io.hpp"
#include "testing.hpp"

using namespace ssm;

namespace {

BipartiteGraph four_cycle() { return BipartiteGraph(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}); }

}  // namespace

TEST_CASE("graph construction rejects bad edges") {
  CHECK_THROWS_AS(BipartiteGraph(2, 2, {{0, 2}}), GraphError);
  CHECK_THROWS_AS(BipartiteGraph(2, 2, {{2, 0}}), GraphError);
  CHECK_THROWS_AS(BipartiteGraph(2, 2, {{0, 1}, {1, 1}, {0, 1}}), GraphError);
  const BipartiteGraph g(3, 1, {{2, 0}, {0, 0}});
  CHECK(g.has_edge({2, 0}));
  CHECK_FALSE(g.has_edge({1, 0}));
  CHECK(g.edges()[0] == Edge{2, 0});
}

TEST_CASE("validate_matching examples") {
  const BipartiteGraph empty(0, 0, {});
  CHECK(validate_matching(empty, std::span<const Edge>{}).ok);

  const BipartiteGraph path(2, 1, {{0, 0}, {1, 0}});
  const std::vector<Edge> shared{{0, 0}, {1, 0}};
  const auto v = validate_matching(path, shared);
  CHECK_FALSE(v.ok);
  CHECK(v.violation.find("b0") != std::string::npos);

  const std::vector<Edge> perfect{{0, 0}, {1, 1}};
  CHECK(validate_matching(four_cycle(), perfect).ok);

  const std::vector<Edge> absent{{0, 0}};
  CHECK_FALSE(validate_matching(BipartiteGraph(2, 2, {{0, 1}}), absent).ok);
}

TEST_CASE("validate_matching agrees with the definition on small graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const BipartiteGraph g = testing::small_random_graph(rng, 8);
    // Candidate sets mix present and absent pairs, with repeats of endpoints.
    std::vector<Edge> cand;
    const auto count = rng.below(5);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Edge e{static_cast<Vertex>(rng.below(g.n_a())), static_cast<Vertex>(rng.below(g.n_b()))};
      if (std::find(cand.begin(), cand.end(), e) == cand.end()) cand.push_back(e);
    }
    CHECK(validate_matching(g, cand).ok == testing::definition_valid(g, cand));
  }
}

TEST_CASE("Matching bookkeeping") {
  Matching m(3, 3);
  m.add({0, 1});
  CHECK(m.contains({0, 1}));
  CHECK(m.covers(Side::A, 0));
  CHECK(m.covers(Side::B, 1));
  CHECK_FALSE(m.can_add({0, 2}));
  CHECK_THROWS_AS(m.add({2, 1}), std::logic_error);
  m.add({2, 0});
  CHECK(m.size() == 2);
  CHECK(m.edges() == std::vector<Edge>{{0, 1}, {2, 0}});
  m.remove({0, 1});
  CHECK(m.size() == 1);
  CHECK_THROWS_AS(m.remove({0, 1}), std::logic_error);
}

TEST_CASE("SemiMatching enforces both caps") {
  SemiMatching s(3, 2, Side::A, 2);
  s.add({0, 0});
  s.add({1, 0});
  CHECK_FALSE(s.can_add({2, 0}));
  CHECK_FALSE(s.can_add({0, 1}));
  CHECK(s.can_add({2, 1}));
  CHECK(s.degree(Side::B, 0) == 2);
  CHECK(s.partner(1) == 0);
  const BipartiteGraph g(3, 2, {{0, 0}, {1, 0}, {2, 0}});
  const std::vector<Edge> over{{0, 0}, {1, 0}, {2, 0}};
  CHECK_FALSE(validate_semi_matching(g, over, Side::A, 2).ok);
  CHECK(validate_semi_matching(g, over, Side::A, 3).ok);
}

TEST_CASE("maximum_matching examples") {
  std::vector<Edge> k33;
  for (Vertex a = 0; a < 3; ++a) {
    for (Vertex b = 0; b < 3; ++b) k33.push_back({a, b});
  }
  CHECK(maximum_matching(BipartiteGraph(3, 3, k33)).size() == 3);
  CHECK(maximum_matching(BipartiteGraph(1, 5, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}})).size() == 1);
  CHECK(maximum_matching(BipartiteGraph(0, 0, {})).size() == 0);
}

TEST_CASE("maximum_matching equals brute force and is deterministic") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteGraph g = testing::small_random_graph(rng, 8);
    const Matching m = maximum_matching(g);
    CHECK(validate_matching(g, m).ok);
    CHECK(m.size() == testing::brute_force_mu(g));
    CHECK(maximum_matching(g) == m);
  }
}

TEST_CASE("is_maximal examples") {
  Matching m(2, 2);
  m.add({0, 0});
  CHECK_FALSE(is_maximal(four_cycle(), m));
  Matching blocking(2, 2);
  blocking.add({0, 1});
  // The 4-cycle a0b1 blocks a0b0 and a1b1 but leaves a1b0 free.
  CHECK_FALSE(is_maximal(four_cycle(), blocking));
  const BipartiteGraph three(2, 2, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(is_maximal(three, blocking));
}

TEST_CASE("graph text format round trip") {
  const BipartiteGraph g(3, 2, {{2, 1}, {0, 0}, {1, 1}});
  std::stringstream ss;
  write_graph(ss, g);
  CHECK(ss.str() == "3 2 3\n2 1\n0 0\n1 1\n");
  const BipartiteGraph back = read_graph(ss);
  CHECK(std::equal(back.edges().begin(), back.edges().end(), g.edges().begin(), g.edges().end()));
}

TEST_CASE("graph text format errors carry line numbers") {
  const auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_graph(in);
    } catch (const FormatError& e) {
      return e.line() == line;
    }
    return false;
  };
  CHECK(fails_at("", 0));
  CHECK(fails_at("2 2 1\n0 5\n", 2));
  CHECK(fails_at("2 2 2\n0 0\n", 0));
  CHECK(fails_at("2 2 1\n0 0\n1 1\n", 3));
  CHECK(fails_at("2 2 2\n0 0\n0 0\n", 0));
  CHECK(fails_at("2 2 1\nx y\n", 2));
  std::istringstream ok("# comment\n\n2 2 1\n# edge follows\n1 0\n");
  CHECK(read_graph(ok).edge_count() == 1);
}
