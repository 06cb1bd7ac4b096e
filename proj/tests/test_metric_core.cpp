#include <catch2/catch_amalgamated.hpp>

#include "coarsecancel/metric_space.hpp"
#include "oracles.hpp"

using namespace ccl;

namespace {

GraphSpec cycle_spec(int n, const std::string& prefix = "v") {
  GraphSpec s;
  for (int i = 0; i < n; ++i) s.vertices.push_back(prefix + std::to_string(i));
  for (int i = 0; i < n; ++i)
    s.edges.push_back({s.vertices[static_cast<std::size_t>(i)],
                       s.vertices[static_cast<std::size_t>((i + 1) % n)], 1.0});
  return s;
}

GraphSpec path_spec(int n) {
  GraphSpec s;
  for (int i = 0; i < n; ++i) s.vertices.push_back("p" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i)
    s.edges.push_back({s.vertices[static_cast<std::size_t>(i)], s.vertices[static_cast<std::size_t>(i + 1)], 1.0});
  return s;
}

}  // namespace

TEST_CASE("build_space: shortest-path metric on small graphs") {
  SECTION("path a-b-c has d(a,c) = 2") {
    GraphSpec s;
    s.vertices = {"a", "b", "c"};
    s.edges = {{"a", "b", 1.0}, {"b", "c", 1.0}};
    auto X = build_space(s);
    REQUIRE(X.d(X.index("a"), X.index("c")) == 2.0);
  }
  SECTION("single vertex gives the 1x1 zero matrix") {
    GraphSpec s;
    s.vertices = {"x"};
    auto X = build_space(s);
    REQUIRE(X.size() == 1);
    REQUIRE(X.d(0, 0) == 0.0);
  }
  SECTION("C6 antipodal distance is 3") {
    auto X = build_space(cycle_spec(6));
    REQUIRE(X.d(X.index("v0"), X.index("v3")) == 3.0);
  }
  SECTION("disconnected graphs are rejected naming the components") {
    GraphSpec s;
    s.vertices = {"a", "b", "c"};
    s.edges = {{"a", "b", 1.0}};
    REQUIRE_THROWS_WITH(build_space(s), Catch::Matchers::ContainsSubstring("c"));
  }
  SECTION("non-positive edge lengths are rejected") {
    GraphSpec s;
    s.vertices = {"a", "b"};
    s.edges = {{"a", "b", 0.0}};
    REQUIRE_THROWS_AS(build_space(s), error);
  }
  SECTION("self-loops are rejected") {
    GraphSpec s;
    s.vertices = {"a"};
    s.edges = {{"a", "a", 1.0}};
    REQUIRE_THROWS_AS(build_space(s), error);
  }
}

TEST_CASE("subdivision refines the same metric") {
  auto X1 = build_space(cycle_spec(4));
  auto X2 = build_space(subdivide(cycle_spec(4), 3));
  REQUIRE(X2.size() == 12);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::string a = "v" + std::to_string(i), b = "v" + std::to_string(j);
      REQUIRE_THAT(X2.d(X2.index(a), X2.index(b)),
                   Catch::Matchers::WithinAbs(X1.d(X1.index(a), X1.index(b)), 1e-12));
    }
}

TEST_CASE("gromov products") {
  auto X = build_space(path_spec(3));
  int a = X.index("p0"), b = X.index("p1"), c = X.index("p2");
  SECTION("(x|y)_x = 0") {
    REQUIRE(X.gromov(a, c, a) == 0.0);
    REQUIRE(X.gromov(b, c, b) == 0.0);
  }
  SECTION("(a|b)_c = 1 on the unit path") { REQUIRE(X.gromov(a, b, c) == 1.0); }
  SECTION("antipodal product vanishes on C4") {
    auto C = build_space(cycle_spec(4));
    REQUIRE(C.gromov(C.index("v0"), C.index("v2"), C.index("v1")) == 0.0);
  }
  SECTION("identity (x|y)_z + (x|z)_y = d(y,z) holds everywhere") {
    auto C = build_space(cycle_spec(6));
    for (int x = 0; x < C.size(); ++x)
      for (int y = 0; y < C.size(); ++y)
        for (int z = 0; z < C.size(); ++z)
          REQUIRE_THAT(C.gromov(x, y, z) + C.gromov(x, z, y),
                       Catch::Matchers::WithinAbs(C.d(y, z), 1e-9));
  }
  SECTION("unknown ids are rejected") { REQUIRE_THROWS_AS(X.index("nope"), error); }
}

TEST_CASE("hyperbolicity_delta on the frozen corpus values") {
  SECTION("trees are exactly 0-hyperbolic") {
    auto X = build_space(path_spec(7));
    REQUIRE(hyperbolicity_delta(X).delta == 0.0);
  }
  SECTION("delta(C4) = 1") {
    auto X = build_space(cycle_spec(4));
    auto rep = hyperbolicity_delta(X);
    REQUIRE_THAT(rep.delta, Catch::Matchers::WithinAbs(1.0, 1e-9));
    // witness attains the bound: d(x,z)+d(y,t) = max(other pairings) + 2 delta
    int x = X.index(rep.witness[0]), y = X.index(rep.witness[1]);
    int z = X.index(rep.witness[2]), t = X.index(rep.witness[3]);
    double lhs = X.d(x, z) + X.d(y, t);
    double rhs = std::max(X.d(x, y) + X.d(z, t), X.d(x, t) + X.d(y, z));
    REQUIRE_THAT(lhs, Catch::Matchers::WithinAbs(rhs + 2 * rep.delta, 1e-9));
  }
  SECTION("delta(C6) = 1, golden from the exhaustive oracle") {
    REQUIRE_THAT(oracle::delta4(oracle::cycle_metric(6)), Catch::Matchers::WithinAbs(1.0, 1e-12));
    auto X = build_space(cycle_spec(6));
    REQUIRE_THAT(hyperbolicity_delta(X).delta, Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
  SECTION("oracle agreement on C5") {
    auto X = build_space(cycle_spec(5));
    REQUIRE_THAT(hyperbolicity_delta(X).delta,
                 Catch::Matchers::WithinAbs(oracle::delta4(oracle::cycle_metric(5)), 1e-9));
  }
  SECTION("thread count does not change the result") {
    auto X = build_space(cycle_spec(9));
    auto r1 = hyperbolicity_delta(X, 1);
    auto r4 = hyperbolicity_delta(X, 4);
    REQUIRE(r1.delta == r4.delta);
    REQUIRE(r1.witness == r4.witness);
  }
  SECTION("relabeling leaves delta unchanged") {
    auto X = build_space(cycle_spec(6));
    auto Y = build_space(cycle_spec(6, "w"));
    REQUIRE(hyperbolicity_delta(X).delta == hyperbolicity_delta(Y).delta);
  }
}

TEST_CASE("condition (1) cross-check with the computed delta") {
  for (int n : {4, 5, 6, 7}) {
    auto X = build_space(cycle_spec(n));
    double delta = hyperbolicity_delta(X).delta;
    REQUIRE(four_point_condition1_defect(X, delta) <= 1e-9);
  }
}

TEST_CASE("five-point metric inequalities") {
  SECTION("tree at delta = 0: no violations") {
    auto X = build_space(path_spec(5));
    auto rep = verify_metric_inequalities(X, 0.0);
    REQUIRE(rep.ok());
    REQUIRE_FALSE(rep.sampled);
  }
  SECTION("C4 at delta = 1: no violations (exhaustive)") {
    auto X = build_space(cycle_spec(4));
    auto rep = verify_metric_inequalities(X, 1.0);
    REQUIRE(rep.ok());
  }
  SECTION("C4 at delta = 0: violations reported with witnesses") {
    auto X = build_space(cycle_spec(4));
    auto rep = verify_metric_inequalities(X, 0.0);
    REQUIRE_FALSE(rep.ok());
    REQUIRE_FALSE(rep.witnesses.empty());
  }
  SECTION("budgeted sampling is seed-deterministic") {
    auto X = build_space(cycle_spec(8));
    auto a = verify_metric_inequalities(X, 1.0, 1000, 42);
    auto b = verify_metric_inequalities(X, 1.0, 1000, 42);
    REQUIRE(a.sampled);
    REQUIRE(a.tuples_checked == b.tuples_checked);
    REQUIRE(a.violations == b.violations);
  }
}

TEST_CASE("bold delta default dominates the sampled H^2 defect") {
  double sampled = oracle::h2_four_point_defect_sample(12345, 20000);
  REQUIRE(sampled <= kBoldDeltaDefault + 1e-9);
  // the sup is ln 2; the default is pinned there
  REQUIRE_THAT(kBoldDeltaDefault, Catch::Matchers::WithinAbs(std::log(2.0), 1e-15));
  REQUIRE(sampled > 0.6);  // sampling actually approaches the sup
}
