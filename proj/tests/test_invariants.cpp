#include <catch2/catch_amalgamated.hpp>

#include "coarsecancel/invariants.hpp"
#include "coarsecancel/windows.hpp"
#include "oracles.hpp"

using namespace ccl;

namespace {

std::shared_ptr<const AmalgamData> free_product(int m, int k) {
  return std::make_shared<AmalgamData>(GroupTable::cyclic(m), GroupTable::cyclic(k),
                                       GroupTable::trivial(), Embedding{{0}}, Embedding{{0}},
                                       std::string("a"), std::string("a"));
}

}  // namespace

TEST_CASE("injectivity radius") {
  SECTION("Z/3 * Z/5 window at cap 2: rinj = 2, attained by ab") {
    auto bw = bass_serre_window(free_product(3, 5), 5);
    auto ir = injectivity_radius(*bw.window, 2, 2);
    REQUIRE(ir.finite);
    REQUIRE(ir.value == 2.0);
    REQUIRE(ir.exact_for_cap);
  }
  SECTION("all-elliptic generators at cap 1: +inf, flagged") {
    auto bw = bass_serre_window(free_product(3, 5), 4);
    auto ir = injectivity_radius(*bw.window, 1, 3);
    REQUIRE_FALSE(ir.finite);
    REQUIRE(std::isinf(ir.value));
  }
  SECTION("free group rank 2 on its Cayley window at cap 1: rinj = 1") {
    auto W = free_group_cayley_window(2, 5, 2);
    auto ir = injectivity_radius(*W, 1, 3);
    REQUIRE(ir.finite);
    REQUIRE(ir.value == 1.0);
  }
}

TEST_CASE("invariant e") {
  SECTION("cyclic loxodromic subgroups: trivial inputs give e = 1") {
    REQUIRE(invariant_e({}) == 1);
    REQUIRE(invariant_e({GroupTable::trivial()}) == 1);
  }
  SECTION("[Z/3] gives Hol exponent 6") { REQUIRE(invariant_e({GroupTable::cyclic(3)}) == 6); }
  SECTION("[Z/3, Z/5] gives lcm(6, 20) = 60") {
    REQUIRE(invariant_e({GroupTable::cyclic(3), GroupTable::cyclic(5)}) == 60);
  }
  SECTION("singleton list matches the holomorph exponent directly") {
    for (int n : {2, 3, 4, 5})
      REQUIRE(invariant_e({GroupTable::cyclic(n)}) ==
              group_exponent(holomorph(GroupTable::cyclic(n))));
  }
}

TEST_CASE("overlap_A") {
  auto bw = bass_serre_window(free_product(3, 3), 6, 6);
  const ActionWindow& W = *bw.window;
  SECTION("single word: diameter of its thickened axis") {
    auto ov = overlap_A(W, {W.parse_word("ab")}, 0.0);
    REQUIRE_FALSE(ov.empty);
    auto ax = axis(W, W.parse_word("ab"), 0.0);
    REQUIRE(ov.diameter == subset_diameter(W.space(), ax));
  }
  SECTION("a and bab^-1: disjoint fixed sets give the golden empty overlap") {
    auto ov = overlap_A(W, {W.parse_word("a"), W.parse_word("baB")}, 0.0);
    REQUIRE(ov.empty);
    REQUIRE(ov.diameter == 0.0);
  }
  SECTION("permutation invariance") {
    auto ov1 = overlap_A(W, {W.parse_word("ab"), W.parse_word("ba")}, 0.0);
    auto ov2 = overlap_A(W, {W.parse_word("ba"), W.parse_word("ab")}, 0.0);
    REQUIRE(ov1.diameter == ov2.diameter);
    REQUIRE(ov1.empty == ov2.empty);
  }
  SECTION("adding words never increases the overlap") {
    auto ov1 = overlap_A(W, {W.parse_word("ab")}, 0.0);
    auto ov2 = overlap_A(W, {W.parse_word("ab"), W.parse_word("ba")}, 0.0);
    double v1 = ov1.empty ? 0.0 : ov1.diameter;
    double v2 = ov2.empty ? 0.0 : ov2.diameter;
    REQUIRE(v2 <= v1 + 1e-12);
  }
}

TEST_CASE("invariant A estimate") {
  auto bw = bass_serre_window(free_product(3, 5), 4, 2);
  const ActionWindow& W = *bw.window;
  SECTION("tree window at delta = 0: the threshold degenerates and the estimate is 0") {
    auto est = invariant_A_estimate(W, 1, 500.0, 0.0, 2, 3);
    REQUIRE(est.value == 0.0);
    REQUIRE(est.bound == Bound::Lower);
  }
  SECTION("nu larger than the eligible tuple set gives 0, flagged") {
    auto est = invariant_A_estimate(W, 50, 500.0, 0.0, 1, 3);
    REQUIRE(est.value == 0.0);
    REQUIRE(est.tuples_examined == 0);
  }
}

TEST_CASE("overlap bounds verification") {
  auto bw = bass_serre_window(free_product(3, 5), 6, 6);
  const ActionWindow& W = *bw.window;
  InvariantLedger led;
  led.delta = 0.0;
  led.rinj = LogValue::from_linear(2.0);
  led.e = 1;
  led.nu = 1;
  led.A = LogValue::zero();  // structural: thickened axes of short tuples are disjoint
  SECTION("certified non-elementary pairs have non-negative margins") {
    std::vector<std::vector<Word>> samples = {
        {W.parse_word("a"), W.parse_word("ab")},
        {W.parse_word("ab"), W.parse_word("ba")},
        {W.parse_word("b"), W.parse_word("ab")},
    };
    auto rep = verify_overlap_bounds(W, led, samples, 500.0, 3);
    REQUIRE(rep.all_nonnegative);
    REQUIRE_FALSE(rep.margins.empty());
    for (auto& m : rep.margins) REQUIRE(m.margin >= -1e-9);
  }
  SECTION("elementary tuples are filtered, empty samples give empty reports") {
    std::vector<std::vector<Word>> samples = {{W.parse_word("a"), word_power(W.parse_word("a"), 2)}};
    auto rep = verify_overlap_bounds(W, led, samples, 500.0, 3);
    REQUIRE(rep.filtered_elementary == 1);
    REQUIRE(rep.margins.empty());
    auto rep2 = verify_overlap_bounds(W, led, {}, 500.0, 3);
    REQUIRE(rep2.margins.empty());
  }
}

TEST_CASE("nu bound from acylindricity") {
  SECTION("free action table with rinj >= d gives 1 + 1 = 2") {
    AcylindricityTable t;
    t.rows = {{0.0, 3}, {1.0, 1}, {2.0, 1}};
    auto nb = nu_bound_from_acylindricity(t, 2.0);
    REQUIRE(nb.bound == 2);  // N(1) = 1, M = ceil(1/2) = 1
  }
  SECTION("N = 1, d = 3, rinj = 2 gives M = 2 and bound 3") {
    AcylindricityTable t;
    t.rows = {{3.0, 1}};
    auto nb = nu_bound_from_acylindricity(t, 2.0);
    REQUIRE(nb.bound == 3);
    REQUIRE(nb.m_steps == 2);
  }
  SECTION("rinj = 0 is rejected") {
    AcylindricityTable t;
    t.rows = {{1.0, 1}};
    REQUIRE_THROWS_AS(nu_bound_from_acylindricity(t, 0.0), error);
  }
  SECTION("monotone: enlarging N or d never decreases the bound") {
    AcylindricityTable t1, t2, t3;
    t1.rows = {{2.0, 2}};
    t2.rows = {{2.0, 3}};
    t3.rows = {{4.0, 2}};
    double rinj = 1.0;
    auto b1 = nu_bound_from_acylindricity(t1, rinj).bound;
    REQUIRE(nu_bound_from_acylindricity(t2, rinj).bound >= b1);
    REQUIRE(nu_bound_from_acylindricity(t3, rinj).bound >= b1);
  }
  SECTION("derived from the real Z/3 * Z/5 table at l = 166 delta = 0") {
    auto bw = bass_serre_window(free_product(3, 5), 5, 4);
    auto table = acylindricity_table(*bw.window, 0.0);  // 166 delta = 0 on trees
    auto nb = nu_bound_from_acylindricity(table, 2.0);
    REQUIRE(nb.bound == 2);  // N(d)=1 for d >= 1 and M = 1
  }
}

TEST_CASE("kappa for hyperbolic groups") {
  REQUIRE(kappa_for_hyperbolic({1}, 1) == 1);
  REQUIRE(kappa_for_hyperbolic({3, 5}, 1) == 15);
  REQUIRE(kappa_for_hyperbolic({3, 9}, 3) == 9);
  SECTION("even orders violate the no-involution hypothesis") {
    REQUIRE_THROWS_WITH(kappa_for_hyperbolic({3, 2}, 1),
                        Catch::Matchers::ContainsSubstring("no-involution"));
    REQUIRE_THROWS_AS(kappa_for_hyperbolic({3}, 2), error);
  }
}

TEST_CASE("ledger soundness flags") {
  InvariantLedger led;
  led.e = 1;
  led.nu = 1;
  SECTION("default flags are sound") { REQUIRE_NOTHROW(led.require_sound_for_certification()); }
  SECTION("an A lower bound is rejected where the certifier needs an upper bound") {
    led.A_bound = Bound::Lower;
    REQUIRE_THROWS_AS(led.require_sound_for_certification(), error);
  }
  SECTION("an rinj upper bound is rejected") {
    led.rinj_bound = Bound::Upper;
    REQUIRE_THROWS_AS(led.require_sound_for_certification(), error);
  }
}
