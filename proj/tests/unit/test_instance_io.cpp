#include <doctest.h>

#include <cmath>
#include <string>

#include "augbp/baselines.hpp"
#include "augbp/error.hpp"
#include "augbp/instance_io.hpp"

using namespace augbp;
using namespace augbp::io;

namespace {

// TSPLIB burma14; the published optimal tour length is 3323.
const char* const kBurma14 = R"(NAME: burma14
TYPE: TSP
COMMENT: 14-Staedte in Burma (Zaw Win)
DIMENSION: 14
EDGE_WEIGHT_TYPE: GEO
EDGE_WEIGHT_FORMAT: FUNCTION
DISPLAY_DATA_TYPE: COORD_DISPLAY
NODE_COORD_SECTION
   1  16.47       96.10
   2  16.47       94.44
   3  20.09       92.54
   4  22.39       93.37
   5  25.23       97.24
   6  22.00       96.05
   7  20.47       97.02
   8  17.20       96.29
   9  16.30       97.38
  10  14.05       98.12
  11  16.53       97.38
  12  21.52       95.59
  13  19.41       97.13
  14  20.09       94.55
EOF
)";

}  // namespace

TEST_CASE("EUC_2D Pythagorean triangle") {
  const auto inst = parse_tsplib(R"(NAME : tri
TYPE : TSP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
)");
  CHECK(inst.name() == "tri");
  CHECK(inst.distance(0, 1) == 3.0);
  CHECK(inst.distance(0, 2) == 4.0);
  CHECK(inst.distance(1, 2) == 5.0);
}

TEST_CASE("EUC_2D rounds to the nearest integer") {
  const auto inst = parse_tsplib(
      "NAME: r\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2.6 0\nEOF\n");
  CHECK(inst.distance(0, 1) == 1.0);  // sqrt(2)
  CHECK(inst.distance(0, 2) == 3.0);  // 2.6
  CHECK(inst.distance(1, 2) == 2.0);  // sqrt(3.56)
}

TEST_CASE("explicit matrices") {
  const auto full = parse_tsplib(R"(NAME: full
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
0 2 9
2 0 4
9 4 0
EOF
)");
  CHECK(full.distance(0, 1) == 2.0);
  CHECK(full.distance(2, 0) == 9.0);
  CHECK(full.distance(1, 2) == 4.0);

  const auto upper = parse_tsplib(R"(NAME: upper
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: UPPER_ROW
EDGE_WEIGHT_SECTION
12 5
7
EOF
)");
  CHECK(upper.distance(0, 1) == 12.0);
  CHECK(upper.distance(0, 2) == 5.0);
  CHECK(upper.distance(1, 2) == 7.0);
}

TEST_CASE("GEO distances reproduce the burma14 optimum") {
  const auto inst = parse_tsplib(kBurma14);
  CHECK(inst.num_nodes() == 14);
  CHECK(inst.distance(0, 1) == 153.0);
  CHECK(inst.distance(0, 7) == 70.0);
  for (tsp::EdgeId e = 0; e < inst.num_edges(); ++e) {
    CHECK(inst.distance(e) >= 0.0);
    CHECK(inst.distance(e) == std::floor(inst.distance(e)));
  }
  CHECK(tsp::held_karp_exact(inst).tour.length == 3323.0);
}

TEST_CASE("TSPLIB errors") {
  CHECK_THROWS_AS(parse_tsplib("NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: CEIL_2D\nEOF\n"),
                  UnsupportedFormat);
  CHECK_THROWS_AS(parse_tsplib("NAME: x\nTYPE: ATSP\nDIMENSION: 3\nEOF\n"), UnsupportedFormat);
  try {
    parse_tsplib("NAME: x\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 9);
    CHECK(std::string(e.what()).find("DIMENSION") != std::string::npos);
  }
  try {
    parse_tsplib("NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\n"
                 "EDGE_WEIGHT_SECTION\n1 2\nfoo\nEOF\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
  }
  CHECK_THROWS_AS(parse_tsplib("NAME: x\nTYPE: TSP\nEDGE_WEIGHT_TYPE: EUC_2D\nEOF\n"), ParseError);
  // An asymmetric explicit matrix is not a symmetric TSP.
  CHECK_THROWS_AS(parse_tsplib("NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
                               "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2\n1 0 3\n2 4 0\nEOF\n"),
                  InvalidInstance);
}

TEST_CASE("explicit round trip is exact") {
  for (const auto family : {Family::Euclid2d, Family::RandomMatrix, Family::Hamming20, Family::Correlation5}) {
    const auto inst = gen_instance({family, 11, 5});
    const auto back = parse_tsplib(write_tsplib(inst));
    CHECK(back.name() == inst.name());
    REQUIRE(back.num_nodes() == inst.num_nodes());
    for (tsp::EdgeId e = 0; e < inst.num_edges(); ++e) CHECK(back.distance(e) == inst.distance(e));
  }
  const auto burma = parse_tsplib(kBurma14);
  const auto back = parse_tsplib(write_tsplib(burma));
  for (tsp::EdgeId e = 0; e < burma.num_edges(); ++e) CHECK(back.distance(e) == burma.distance(e));
}

TEST_CASE("generators are pure functions of family, size and seed") {
  for (const auto family : {Family::Euclid2d, Family::RandomMatrix, Family::Hamming20, Family::Correlation5}) {
    const auto a = gen_instance({family, 6, 9});
    const auto b = gen_instance({family, 6, 9});
    const auto c = gen_instance({family, 6, 10});
    CHECK(a.name() == std::string(to_string(family)) + "-n6-s9");
    bool differs = false;
    for (tsp::EdgeId e = 0; e < a.num_edges(); ++e) {
      CHECK(a.distance(e) == b.distance(e));
      differs = differs || a.distance(e) != c.distance(e);
    }
    CHECK(differs);
    CHECK(parse_family(to_string(family)) == family);
  }
  CHECK_FALSE(parse_family("euclid3d").has_value());
  CHECK_THROWS_AS(gen_instance({Family::Euclid2d, 2, 1}), InvalidInstance);
}

TEST_CASE("generated distances have their family's shape") {
  const auto euclid = gen_instance({Family::Euclid2d, 25, 3});
  for (tsp::NodeId a = 0; a < 25; ++a) {
    for (tsp::NodeId b = 0; b < 25; ++b) {
      for (tsp::NodeId c = 0; c < 25; ++c) {
        CHECK(euclid.distance(a, c) <= euclid.distance(a, b) + euclid.distance(b, c) + 1e-12);
      }
    }
  }
  for (tsp::EdgeId e = 0; e < euclid.num_edges(); ++e) CHECK(euclid.distance(e) <= std::sqrt(2.0));

  const auto matrix = gen_instance({Family::RandomMatrix, 30, 3});
  for (const double d : matrix.distances()) CHECK((d >= 0.0 && d < 1.0));

  const auto hamming = gen_instance({Family::Hamming20, 30, 3});
  for (const double d : hamming.distances()) CHECK((d == std::floor(d) && d >= 0.0 && d <= 20.0));

  const auto corr = gen_instance({Family::Correlation5, 30, 3});
  for (const double d : corr.distances()) CHECK((d >= 0.0 && d <= 2.0 + 1e-12));

  // Identical vectors give distance zero, which instances accept.
  CHECK_NOTHROW(tsp::TspInstance(3, {0.0, 1.0, 1.0}));
}

TEST_CASE("edge lists") {
  const auto triangle = parse_edge_list("0 1\n1 2\n0 2\n");
  CHECK(triangle.n == 3);
  REQUIRE(triangle.edges.size() == 3);
  for (const auto& e : triangle.edges) CHECK(e.weight == 1.0);

  const auto symbolic = parse_edge_list("a b 2.5\n");
  CHECK(symbolic.n == 2);
  CHECK(symbolic.labels == std::vector<std::string>{"a", "b"});
  CHECK(symbolic.edges.front().weight == 2.5);

  const auto duplicate = parse_edge_list("0 1 1\n# comment\n\n1 0 1  # trailing\n");
  CHECK(duplicate.edges.size() == 1);
  CHECK(duplicate.edges.front().weight == 2.0);

  // Names compact by first appearance, not by value.
  const auto order = parse_edge_list("10 3\n3 7\n");
  CHECK(order.labels == std::vector<std::string>{"10", "3", "7"});
  CHECK(order.edges[1].u == 1);
  CHECK(order.edges[1].v == 2);

  try {
    parse_edge_list("0 1\n1 2 heavy\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_edge_list("0 1\n2 2\n"), InvalidInstance);
  CHECK_THROWS_AS(parse_edge_list("0 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(read_file("/nonexistent/graph.txt"), Error);
}
