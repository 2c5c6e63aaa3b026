#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ssm/algorithms.hpp"
#include "ssm/rs.hpp"

using namespace ssm;

namespace {

const ColouringParams& p31() {
  static const ColouringParams params = ColouringParams::make(3, 1);
  return params;
}

RSInstance certified(const ColouringParams& params) {
  RSInstance inst = build_rs_instance(params);
  inst.certificate = certify_rs(inst);
  return inst;
}

std::vector<Edge> sorted(std::vector<Edge> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("colouring parameters live on a lattice") {
  const auto& p = p31();
  CHECK(p.delta() == doctest::Approx(2.0));
  CHECK(p.width() == 4);
  CHECK(p.shift() == 2);
  CHECK(p.side_size() == Vertex{729});
  CHECK(p.intersection_threshold() == 0);
  CHECK_NOTHROW(ColouringParams::make(6, 2));
  CHECK_NOTHROW(ColouringParams::make(12, 4));
  try {
    ColouringParams::make(4, 1);
    FAIL("accepted m = 4");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("nearest valid is (m=3, k=1)") != std::string::npos);
  }
  CHECK_THROWS_AS(ColouringParams::make(6, 3), std::invalid_argument);
  CHECK_FALSE(ColouringParams::make(30, 1).side_size().has_value());
}

TEST_CASE("strip colours") {
  const auto& p = p31();
  CHECK(colour_of_sum(p, 0) == Colour::Red);
  CHECK(colour_of_sum(p, 1) == Colour::White);
  CHECK(colour_of_sum(p, 2) == Colour::Blue);
  CHECK(colour_of_sum(p, 3) == Colour::White);
  CHECK(colour_of_sum(p, 4) == Colour::Red);
  const std::vector<std::uint32_t> zero(3, 0);
  CHECK(colour_vertex(p, zero, {1}) == Colour::Red);

  const auto p62 = ColouringParams::make(6, 2);  // strips: R [0,2) W [2,4) B [4,6) W [6,8)
  CHECK(colour_of_sum(p62, 1) == Colour::Red);
  CHECK(colour_of_sum(p62, 3) == Colour::White);
  CHECK(colour_of_sum(p62, 5) == Colour::Blue);
  CHECK(colour_of_sum(p62, 7) == Colour::White);
  CHECK(colour_of_sum(p62, 8) == Colour::Red);
}

TEST_CASE("colour frequencies are near the strip share") {
  const auto& p = p31();
  for (const IndexSet& index : {IndexSet{0}, IndexSet{2}}) {
    std::size_t red = 0;
    std::size_t blue = 0;
    for (Vertex v = 0; v < 729; ++v) {
      const Colour c = colour_vertex(p, decode_vertex(p, v), index);
      red += c == Colour::Red;
      blue += c == Colour::Blue;
    }
    const double share = 1.0 / (2.0 + p.delta());
    CHECK(std::abs(red / 729.0 - share) < 0.1);
    CHECK(std::abs(blue / 729.0 - share) < 0.1);
  }
}

TEST_CASE("vertex encoding round trip") {
  const auto& p = p31();
  for (Vertex v = 0; v < 729; v += 37) {
    const auto c = decode_vertex(p, v);
    CHECK(encode_vertex(p, c) == v);
  }
  CHECK(decode_vertex(p, 1) == std::vector<std::uint32_t>{1, 0, 0});
  CHECK(decode_vertex(p, 9) == std::vector<std::uint32_t>{0, 1, 0});
}

TEST_CASE("matching pairs go blue to red under their own index set") {
  const auto& p = p31();
  for (const auto& index : build_family(p, 0)) {
    const MatchingPair mp = build_matching_pair(p, index);
    CHECK_FALSE(mp.forward.empty());
    CHECK(mp.forward.size() == mp.mirrored.size());
    for (const Edge e : mp.forward) {
      CHECK(colour_vertex(p, decode_vertex(p, e.a), index) == Colour::Blue);
      CHECK(colour_vertex(p, decode_vertex(p, e.b), index) == Colour::Red);
    }
    for (const Edge e : mp.mirrored) {
      CHECK(colour_vertex(p, decode_vertex(p, e.a), index) == Colour::Red);
      CHECK(colour_vertex(p, decode_vertex(p, e.b), index) == Colour::Blue);
    }
    std::vector<Edge> both = mp.forward;
    both.insert(both.end(), mp.mirrored.begin(), mp.mirrored.end());
    CHECK(validate_matching(BipartiteGraph(729, 729, both), both).ok);
  }
  CHECK_THROWS_AS(build_matching_pair(p, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_matching_pair(p, {3}), std::invalid_argument);
}

TEST_CASE("family selection") {
  CHECK(build_family(p31(), 0) == std::vector<IndexSet>{{0}, {1}, {2}});
  const auto p62 = ColouringParams::make(6, 2);
  const auto fam = build_family(p62, p62.intersection_threshold());
  CHECK(fam.front() == IndexSet{0, 1});
  CHECK(fam.size() == 15);  // threshold 1: every pair of 2-subsets qualifies
  const auto strict = build_family(p62, 0);
  CHECK(strict == std::vector<IndexSet>{{0, 1}, {2, 3}, {4, 5}});
  for (std::size_t i = 0; i < strict.size(); ++i) {
    for (std::size_t j = i + 1; j < strict.size(); ++j) {
      std::vector<std::uint32_t> common;
      std::set_intersection(strict[i].begin(), strict[i].end(), strict[j].begin(), strict[j].end(),
                            std::back_inserter(common));
      CHECK(common.empty());
    }
  }
}

TEST_CASE("certification of the smallest construction") {
  const RSInstance inst = certified(p31());
  const auto& c = *inst.certificate;
  CHECK(inst.pairs.size() == 3);
  CHECK(inst.matching_count() == 6);
  CHECK(c.pairs_checked == 30);
  CHECK(c.shared_edges == 0);
  CHECK(c.induced_violations == 0);
  CHECK(c.cross_violations == 0);
  CHECK(c.colour_conflicts == 0);
  CHECK(c.sizes_mirror);
  CHECK(c.invalid_unions.empty());
  CHECK(c.ok());
  CHECK(c.matched_fraction.size() == 3);
  CHECK(c.matched_fraction[0] > 0.0);
}

TEST_CASE("a single index set certifies trivially") {
  RSInstance inst = build_rs_instance(p31(), {{1}});
  inst.certificate = certify_rs(inst);
  CHECK(inst.certificate->ok());
  CHECK(inst.certificate->pairs_checked == 2);
}

TEST_CASE("certification reports a repeated matching") {
  RSInstance inst = build_rs_instance(p31());
  inst.pairs[1] = inst.pairs[0];
  const auto c = certify_rs(inst);
  CHECK_FALSE(c.ok());
  CHECK(c.shared_edges > 0);
  CHECK(c.induced_violations > 0);
  CHECK_FALSE(c.violations.empty());
}

TEST_CASE("instance size is capped") {
  CHECK_THROWS_AS(build_rs_instance(ColouringParams::make(6, 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_rs_instance(p31(), std::vector<IndexSet>{}), std::invalid_argument);
}

TEST_CASE("manifest round trip") {
  const RSInstance inst = certified(p31());
  std::stringstream ss;
  write_rs_manifest(ss, inst);
  CHECK(ss.str().find("certificate ok") != std::string::npos);
  const ManifestHeader h = read_rs_manifest(ss);
  CHECK(h.m == 3);
  CHECK(h.k == 1);
  CHECK(h.family == std::vector<IndexSet>{{0}, {1}, {2}});
  std::istringstream bad("m 3\n");
  CHECK_THROWS_AS(read_rs_manifest(bad), std::runtime_error);
}

TEST_CASE("lambda with one matching") {
  RsGraph rs;
  rs.side = 5;
  rs.matchings.push_back({{0, 1}, {2, 3}});
  const CommInstance c = assemble_lambda(rs, 1, 3);
  CHECK(c.special == 0);
  CHECK(c.sampled_special.size() == 1);
  CHECK(c.x_pads == 3);  // b0, b2, b4 are uncovered
  CHECK(c.y_pads == 3);  // a1, a3, a4 are uncovered
  CHECK(c.bob.size() == 6);
  CHECK(c.graph.n_a() == 8);
  CHECK(c.graph.n_b() == 8);
  CHECK(validate_matching(c.graph, c.witness()).ok);
}

TEST_CASE("lambda on the smallest construction") {
  const RSInstance inst = certified(p31());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CommInstance c = gen_lambda(inst, {false, seed, 0, std::nullopt});
    CHECK(c.matchings == 6);
    CHECK(c.special < 6);
    CHECK(validate_matching(c.graph, c.witness()).ok);
    const auto mu = maximum_matching(c.graph).size();
    CHECK(mu >= c.sampled_special.size() + c.x_pads + c.y_pads);
    const CommInstance again = gen_lambda(inst, {false, seed, 0, std::nullopt});
    CHECK(again.special == c.special);
    CHECK(std::equal(c.graph.edges().begin(), c.graph.edges().end(),
                     again.graph.edges().begin(), again.graph.edges().end()));
  }
  const CommInstance small = gen_lambda(inst, {false, 1, 0, std::size_t{4}});
  CHECK(small.sampled_special.size() == 4);
  CHECK(small.alice.size() == 24);

  RSInstance unchecked = build_rs_instance(p31());
  CHECK_THROWS_AS(gen_lambda(unchecked, {}), std::invalid_argument);
}

TEST_CASE("lambda+ streams hand greedy the overlay") {
  const RSInstance inst = certified(p31());
  for (std::size_t pair = 0; pair < 3; ++pair) {
    const CommInstance c = gen_lambda(inst, {true, 40 + pair, pair, std::nullopt});
    CHECK(c.plus);
    CHECK(c.matchings == 4);
    CHECK(c.overlay.size() == inst.side);
    auto s = open_stream(c.graph);
    const Matching m = greedy(s);
    CHECK(m.edges() == sorted(c.overlay));
    Matching overlay(c.graph.n_a(), c.graph.n_b());
    for (const Edge e : c.overlay) overlay.add(e);
    CHECK(is_maximal(c.graph, overlay));
  }
  CHECK_THROWS_AS(gen_lambda(inst, {true, 0, 3, std::nullopt}), std::invalid_argument);
  RSInstance single = build_rs_instance(p31(), {{0}});
  single.certificate = certify_rs(single);
  CHECK_THROWS_AS(gen_lambda(single, {true, 0, 0, std::nullopt}), std::invalid_argument);
}
