#include <catch2/catch_amalgamated.hpp>

#include "coarsecancel/amalgam.hpp"
#include "coarsecancel/group_table.hpp"
#include "oracles.hpp"

using namespace ccl;

namespace {

std::shared_ptr<const AmalgamData> free_product(int m, int k) {
  return std::make_shared<AmalgamData>(GroupTable::cyclic(m), GroupTable::cyclic(k),
                                       GroupTable::trivial(), Embedding{{0}}, Embedding{{0}},
                                       std::string("a"), std::string("a"));
}

}  // namespace

TEST_CASE("group tables") {
  SECTION("cyclic construction and validation") {
    auto z6 = GroupTable::cyclic(6);
    REQUIRE(z6.size() == 6);
    REQUIRE(z6.order_of(z6.index("a")) == 6);
    REQUIRE(group_exponent(z6) == 6);
    REQUIRE(z6.has_involution());
  }
  SECTION("trivial group") {
    REQUIRE(group_exponent(GroupTable::trivial()) == 1);
    REQUIRE_FALSE(GroupTable::trivial().has_involution());
  }
  SECTION("S3 exponent is lcm of orders {1,2,3} = 6") {
    auto s3 = GroupTable::symmetric(3);
    REQUIRE(s3.size() == 6);
    std::int64_t lcm = 1;
    for (int a = 0; a < s3.size(); ++a) lcm = lcm64(lcm, s3.order_of(a));
    REQUIRE(lcm == 6);  // brute-force oracle
    REQUIRE(group_exponent(s3) == 6);
  }
  SECTION("broken tables are rejected") {
    REQUIRE_THROWS_AS(GroupTable::from_table({"e", "x"}, {{0, 1}, {1, 1}}), error);
  }
}

TEST_CASE("automorphism groups by brute force") {
  SECTION("Aut(Z/3) has order 2") {
    REQUIRE(automorphism_group(GroupTable::cyclic(3)).table.size() == 2);
  }
  SECTION("Aut(trivial) is trivial") {
    REQUIRE(automorphism_group(GroupTable::trivial()).table.size() == 1);
  }
  SECTION("Aut(Z/5) is cyclic of order 4") {
    auto aut = automorphism_group(GroupTable::cyclic(5));
    REQUIRE(aut.table.size() == 4);
    REQUIRE(group_exponent(aut.table) == 4);
  }
  SECTION("Aut(S3) = Inn(S3) has order 6") {
    REQUIRE(automorphism_group(GroupTable::symmetric(3)).table.size() == 6);
  }
  SECTION("cap is enforced") {
    REQUIRE_THROWS_AS(automorphism_group(GroupTable::cyclic(10), 8), error);
  }
}

TEST_CASE("holomorphs") {
  SECTION("Hol(trivial) is trivial with exponent 1") {
    auto h = holomorph(GroupTable::trivial());
    REQUIRE(h.size() == 1);
    REQUIRE(group_exponent(h) == 1);
  }
  SECTION("Hol(Z/3) has order 6 and exponent 6") {
    auto h = holomorph(GroupTable::cyclic(3));
    REQUIRE(h.size() == 6);
    REQUIRE(group_exponent(h) == 6);
  }
  SECTION("Hol(Z/5) has order 20 and exponent 20 (element orders 1,2,4,5)") {
    auto h = holomorph(GroupTable::cyclic(5));
    REQUIRE(h.size() == 20);
    REQUIRE(group_exponent(h) == 20);
    std::vector<int> orders;
    for (int a = 0; a < h.size(); ++a) orders.push_back(h.order_of(a));
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    REQUIRE(orders == std::vector<int>{1, 2, 4, 5});
  }
  SECTION("order multiplies and exponent divisibility") {
    for (int n : {2, 3, 4, 5, 6}) {
      auto f = GroupTable::cyclic(n);
      auto aut = automorphism_group(f);
      auto h = holomorph(f);
      REQUIRE(h.size() == f.size() * aut.table.size());
      REQUIRE(group_exponent(h) % group_exponent(f) == 0);
    }
  }
}

TEST_CASE("malnormality") {
  auto s3 = GroupTable::symmetric(3);
  SECTION("trivial subgroup is malnormal") {
    REQUIRE(malnormality_check(s3, {s3.identity()}));
  }
  SECTION("the whole group is vacuously malnormal") {
    std::vector<int> all;
    for (int i = 0; i < s3.size(); ++i) all.push_back(i);
    REQUIRE(malnormality_check(s3, all));
  }
  SECTION("2-element subgroup of S3: golden value from the conjugation scan") {
    // transpositions are self-normalizing in S3 and distinct conjugates meet
    // trivially, so the scan comes out malnormal
    int t = -1;
    for (int a = 0; a < s3.size(); ++a)
      if (a != s3.identity() && s3.order_of(a) == 2) {
        t = a;
        break;
      }
    bool golden = true;  // frozen from the exhaustive oracle scan
    REQUIRE(malnormality_check(s3, {s3.identity(), t}) == golden);
  }
  SECTION("index-2 subgroup of Z/6 is not malnormal (normal, nontrivial)") {
    auto z6 = GroupTable::cyclic(6);
    int a3 = z6.index("a3");  // order-2 element
    REQUIRE_FALSE(malnormality_check(z6, {z6.identity(), a3}));
  }
  SECTION("non-subgroups are rejected") {
    REQUIRE_THROWS_AS(malnormality_check(s3, {1}), error);
  }
}

TEST_CASE("amalgam normal forms") {
  auto d = free_product(3, 5);
  const AmalgamData& A = *d;
  int a = A.A().index("a"), b = A.B().index("a");
  SECTION("words inside one factor collapse to a single syllable") {
    auto nf = amal::normal_form(A, {{0, a}, {0, a}});
    REQUIRE(nf.syllables.size() == 1);
    REQUIRE(nf.syllables[0].first == 0);
  }
  SECTION("a a^-1 is the identity") {
    auto nf = amal::normal_form(A, {{0, a}, {0, A.A().inverse(a)}});
    REQUIRE(nf.is_identity(A));
  }
  SECTION("ab has two syllables (C trivial)") {
    auto nf = amal::normal_form(A, {{0, a}, {1, b}});
    REQUIRE(nf.syllables.size() == 2);
  }
  SECTION("normal forms are idempotent and multiplication matches") {
    auto ab = amal::normal_form(A, {{0, a}, {1, b}});
    auto again = amal::mul(A, ab, amal::identity_nf(A));
    REQUIRE(ab == again);
    auto sq = amal::mul(A, ab, ab);
    REQUIRE(sq.syllables.size() == 4);
    REQUIRE(amal::mul(A, sq, amal::inverse(A, sq)).is_identity(A));
  }
  SECTION("oracle agreement on random words") {
    // independent reduction oracle over Z/3 * Z/5
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<FactorLetter> letters;
      oracle::FPWord ow;
      int len = static_cast<int>(rng() % 6);
      for (int i = 0; i < len; ++i) {
        int f = static_cast<int>(rng() % 2);
        int mod = f == 0 ? 3 : 5;
        int v = 1 + static_cast<int>(rng() % (mod - 1));
        letters.push_back({f, f == 0 ? A.A().index(v == 1 ? "a" : "a" + std::to_string(v))
                                     : A.B().index(v == 1 ? "a" : "a" + std::to_string(v))});
        ow = oracle::fp_mul(ow, oracle::FPWord{{{f == 0 ? 'A' : 'B', v}}}, 3, 5);
      }
      auto nf = amal::normal_form(A, letters);
      REQUIRE(nf.syllables.size() == ow.syl.size());
    }
  }
  SECTION("cyclic reduction strips conjugating ends") {
    // a b a^-1 conjugates down to the single syllable b
    auto w = amal::normal_form(A, {{0, a}, {1, b}, {0, A.A().inverse(a)}});
    REQUIRE(w.syllables.size() == 3);
    auto cyc = amal::cyclic_reduction(A, w);
    REQUIRE(cyc.syllables.size() == 1);
    REQUIRE(oracle::fp_tree_length({{{'A', 1}, {'B', 1}, {'A', 2}}}, 3, 5) == 0);
    // ab is already cyclically reduced: tree length 2
    auto ab = amal::normal_form(A, {{0, a}, {1, b}});
    REQUIRE(amal::cyclic_reduction(A, ab) == ab);
    REQUIRE(oracle::fp_tree_length({{{'A', 1}, {'B', 1}}}, 3, 5) == 2);
  }
}

TEST_CASE("amalgam guards") {
  SECTION("C = A collapses and is rejected") {
    REQUIRE_THROWS_WITH(
        AmalgamData(GroupTable::cyclic(3), GroupTable::cyclic(5), GroupTable::cyclic(3),
                    Embedding{{0, 1, 2}}, Embedding{{0, 0, 0}}, std::nullopt, std::nullopt),
        Catch::Matchers::ContainsSubstring("collapses"));
  }
  SECTION("non-injective embeddings are rejected") {
    REQUIRE_THROWS_AS(AmalgamData(GroupTable::cyclic(4), GroupTable::cyclic(4),
                                  GroupTable::cyclic(2), Embedding{{0, 0}}, Embedding{{0, 2}},
                                  std::nullopt, std::nullopt),
                      error);
  }
  SECTION("non-homomorphic embeddings are rejected") {
    REQUIRE_THROWS_AS(AmalgamData(GroupTable::cyclic(4), GroupTable::cyclic(4),
                                  GroupTable::cyclic(2), Embedding{{0, 1}}, Embedding{{0, 2}},
                                  std::nullopt, std::nullopt),
                      error);
  }
}

TEST_CASE("amalgam with nontrivial C: Z/4 *_{Z/2} Z/6 normal forms") {
  // C = Z/2 embeds as {e, a2} in Z/4 and {e, a3} in Z/6
  auto z4 = GroupTable::cyclic(4);
  auto z6 = GroupTable::cyclic(6);
  auto z2 = GroupTable::cyclic(2);
  Embedding ca{{z4.identity(), z4.index("a2")}};
  Embedding cb{{z6.identity(), z6.index("a3")}};
  AmalgamData d(z4, z6, z2, ca, cb, std::string("a"), std::string("a"));
  int a = d.A().index("a"), b = d.B().index("a");
  SECTION("identity and c-part only") {
    auto nf = amal::normal_form(d, {{0, d.A().index("a2")}});
    REQUIRE(nf.syllables.empty());
    REQUIRE(nf.c == 1);  // the nontrivial C element
  }
  SECTION("a^2 b^3 is trivial (both are the amalgamated involution)") {
    auto nf = amal::normal_form(d, {{0, d.A().index("a2")}, {1, d.B().index("a3")}});
    REQUIRE(nf.is_identity(d));
  }
  SECTION("products and inverses stay consistent") {
    auto w = amal::normal_form(d, {{0, a}, {1, b}, {0, a}});
    REQUIRE(amal::mul(d, w, amal::inverse(d, w)).is_identity(d));
    auto w2 = amal::mul(d, w, w);
    REQUIRE(amal::mul(d, w2, amal::inverse(d, w)) == w);
  }
}
