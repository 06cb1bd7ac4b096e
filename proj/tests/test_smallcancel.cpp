#include <catch2/catch_amalgamated.hpp>

#include "coarsecancel/smallcancel.hpp"
#include "coarsecancel/windows.hpp"
#include "oracles.hpp"

using namespace ccl;

namespace {

std::shared_ptr<const AmalgamData> free_product(int m, int k) {
  return std::make_shared<AmalgamData>(GroupTable::cyclic(m), GroupTable::cyclic(k),
                                       GroupTable::trivial(), Embedding{{0}}, Embedding{{0}},
                                       std::string("a"), std::string("a"));
}

// toy constants used for the iterated-trace goldens
Constants trace_constants() {
  return Constants::toy_mode(/*bold*/ 1.0, /*L_S*/ 500.0, /*delta0*/ 0.1, /*Delta0*/ 100.0,
                             /*rho0*/ 1.0, /*delta1*/ 0.01);
}

InvariantLedger trace_ledger() {
  InvariantLedger led;
  led.delta = 0.01;
  led.rinj = LogValue::from_linear(0.01);
  led.e = 1;
  led.nu = 1;
  led.A = LogValue::zero();
  return led;
}

}  // namespace

TEST_CASE("log-space plumbing") {
  SECTION("sinh in log space matches the asymptotic expansion for huge arguments") {
    double rho0 = Constants::canonical().rho0;
    double lhs = std::log(8 * M_PI) + log_sinh(rho0);
    double rhs = std::log(4 * M_PI) + rho0;
    REQUIRE_THAT(lhs / rhs, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  SECTION("LogValue add and compare") {
    auto a = LogValue::from_linear(3.0), b = LogValue::from_linear(4.0);
    REQUIRE_THAT((a + b).linear(), Catch::Matchers::WithinAbs(7.0, 1e-12));
    REQUIRE(a < b);
    REQUIRE((a * b).linear() == Catch::Approx(12.0));
    REQUIRE((b / a).linear() == Catch::Approx(4.0 / 3.0));
    REQUIRE(LogValue::from_linear(9.0).sqrt().linear() == Catch::Approx(3.0));
  }
}

TEST_CASE("constants modes") {
  SECTION("canonical constants satisfy the magnitude relations") {
    auto c = Constants::canonical();
    REQUIRE(c.rho0 > 1e20 * c.L_S * c.bold_delta);
    REQUIRE(c.delta0 < 1e-10 * c.bold_delta);
    REQUIRE(c.Delta0 < 1e-10 * c.bold_delta);
    REQUIRE_THAT(c.delta1, Catch::Matchers::WithinRel(64e4 * c.bold_delta, 1e-12));
    REQUIRE_FALSE(c.toy);
  }
  SECTION("toy mode records arbitrary values") {
    auto c = trace_constants();
    REQUIRE(c.toy);
    REQUIRE(c.delta1 == 0.01);
  }
  SECTION("invalid canonical values are rejected") {
    Constants c = Constants::canonical();
    c.rho0 = 1.0;
    REQUIRE_THROWS_AS(c.validate(), error);
  }
}

TEST_CASE("family stats") {
  auto bw = bass_serre_window(free_product(3, 5), 5, 4);
  const ActionWindow& W = *bw.window;
  auto ax_ab = axis(W, W.parse_word("ab"), 0.0);
  auto ax_ba = axis(W, W.parse_word("ba"), 0.0);
  SECTION("singleton family: Delta = 0") {
    auto st = family_stats(W, {ax_ab}, {{W.parse_word("ab")}}, 0.0);
    REQUIRE(st.DeltaQ == 0.0);
    REQUIRE(st.TQ == 2.0);
  }
  SECTION("family {Y_ab, Y_ba} with rotations (ab)^n: T = 2n") {
    for (int n : {1, 2, 3}) {
      auto st = family_stats(W, {ax_ab, ax_ba},
                             {{word_power(W.parse_word("ab"), n)},
                              {word_power(W.parse_word("ba"), n)}},
                             0.0);
      REQUIRE(st.TQ == 2.0 * n);
    }
  }
  SECTION("disjoint far cylinders on a tree: Delta = 0") {
    // conjugated axes far from each other
    Word far1 = W.parse_word("ab");
    auto st = family_stats(W, {axis(W, far1, 0.0), axis(W, W.parse_word("Bab"), 0.0)},
                           {{far1}}, 0.0);
    REQUIRE(st.DeltaQ >= 0.0);  // overlap of distinct tree lines is a segment or empty
  }
}

TEST_CASE("certify_small_cancellation") {
  SECTION("constructed toy instance passes all four hypotheses") {
    auto c = Constants::toy_mode(1.0, 500.0, 0.5, 10.0, 1.0, 0.01);
    FamilyStats st;
    st.DeltaQ = 5.0;                          // <= Delta0 = 10
    st.TQ = 8 * M_PI * std::sinh(1.0) + 1.0;  // above the threshold
    auto cert = certify_small_cancellation(0.25, 1.5, st, c);
    REQUIRE(cert.overall);
    REQUIRE(cert.mode == "toy");
    REQUIRE_FALSE(cert.conclusions.empty());
  }
  SECTION("canonical constants reject any graph-scale delta") {
    auto c = Constants::canonical();
    FamilyStats st;
    st.DeltaQ = 0.0;
    st.TQ = 1e12;
    auto cert = certify_small_cancellation(1.0, c.rho0, st, c);
    REQUIRE_FALSE(cert.overall);
    REQUIRE(cert.checks[0].name == "delta <= delta0");
    REQUIRE_FALSE(cert.checks[0].pass);
  }
  SECTION("the boundary T(Q) = 8 pi sinh rho passes (non-strict)") {
    auto c = Constants::toy_mode(1.0, 500.0, 0.5, 10.0, 1.0, 0.01);
    FamilyStats st;
    st.DeltaQ = 0.0;
    st.TQ = 8 * M_PI * std::sinh(2.0);
    auto cert = certify_small_cancellation(0.25, 2.0, st, c);
    REQUIRE(cert.overall);
  }
  SECTION("re-running with identical inputs is bit-identical") {
    auto c = Constants::toy_mode(1.0, 500.0, 0.5, 10.0, 1.0, 0.01);
    FamilyStats st;
    st.DeltaQ = 5.0;
    st.TQ = 100.0;
    auto c1 = certify_small_cancellation(0.25, 1.5, st, c);
    auto c2 = certify_small_cancellation(0.25, 1.5, st, c);
    REQUIRE(c1.overall == c2.overall);
    for (std::size_t i = 0; i < c1.checks.size(); ++i) {
      REQUIRE(c1.checks[i].lhs == c2.checks[i].lhs);
      REQUIRE(c1.checks[i].rhs == c2.checks[i].rhs);
    }
  }
}

TEST_CASE("lambda_n") {
  SECTION("golden log lambda_1 for bold = 1, rho0 = 5, L_S = 500, delta1 = 64e4") {
    auto c = Constants::toy_mode(1.0, 500.0, 1e-3, 1e-3, 5.0, 64e4);
    double golden = 12159988.207900453;  // direct log-arithmetic oracle
    REQUIRE_THAT(lambda_n(1, c).lg, Catch::Matchers::WithinRel(golden, 1e-12));
    REQUIRE_THAT(oracle::log_lambda_n(1.0, 64e4, 5.0, 500.0),
                 Catch::Matchers::WithinRel(golden, 1e-12));
  }
  SECTION("lambda_n / lambda_4n = 2 exactly in log space") {
    auto c = trace_constants();
    for (std::int64_t n : {1, 7, 100, 12345})
      REQUIRE_THAT(lambda_n(n, c).lg - lambda_n(4 * n, c).lg,
                   Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
  }
  SECTION("strictly decreasing, vanishing along powers of 10") {
    auto c = trace_constants();
    double prev = lambda_n(1, c).lg;
    for (int k = 1; k <= 12; ++k) {
      double cur = lambda_n(static_cast<std::int64_t>(std::pow(10, k)), c).lg;
      REQUIRE(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("critical exponent n0") {
  SECTION("golden toy value from the monotone-scan oracle") {
    auto c = Constants::toy_mode(1.0, 500.0, 0.001, 30000.0, 0.5, 0.01);
    auto n0 = critical_exponent_n0(c, 1);
    REQUIRE(n0.representable);
    REQUIRE(n0.n0 == 128110);  // frozen from the independent linear scan
    // scan oracle confirms minimality at the frozen value
    auto lam_ok = [&](std::int64_t n) {
      double ll = oracle::log_lambda_n(static_cast<double>(n), 0.01, 0.5, 500.0);
      double logS = std::log(M_PI) + oracle::log_sinh(2 * 500.0 * 0.01);
      bool ok1 = ll + std::log(0.01) <= std::log(0.001);
      bool ok2 = ll + std::log(6 * std::exp(logS) + 0.9) <= std::min(std::log(30000.0), logS);
      bool ok3 = ll + std::log(500.0 * 0.01 * 0.01 / (4 * M_PI)) - oracle::log_sinh(0.38) <
                 std::log(0.01);
      bool ok4 = ll <= 0.0;
      return ok1 && ok2 && ok3 && ok4;
    };
    REQUIRE(lam_ok(n0.n0));
    REQUIRE_FALSE(lam_ok(n0.n0 - 1));
  }
  SECTION("lambda_n <= 1 is the weakest constraint whenever lambda_n <= 1") {
    // with loose delta0/Delta0 the binding constraint is lambda <= 1 itself
    auto c = Constants::toy_mode(1.0, 500.0, 1e6, 1e9, 0.5, 0.01);
    auto n0 = critical_exponent_n0(c, 1);
    REQUIRE(n0.representable);
    REQUIRE(lambda_n(n0.n0, c).lg <= 0.0);
    if (n0.n0 > 100) REQUIRE(lambda_n(n0.n0 - 1, c).lg > 0.0);
  }
  SECTION("doubling delta0 never increases n0") {
    auto c1 = Constants::toy_mode(1.0, 500.0, 0.001, 30000.0, 0.5, 0.01);
    auto c2 = Constants::toy_mode(1.0, 500.0, 0.002, 30000.0, 0.5, 0.01);
    REQUIRE(critical_exponent_n0(c2, 1).n0 <= critical_exponent_n0(c1, 1).n0);
  }
  SECTION("canonical constants put n0 beyond integer range, reported in log space") {
    auto n0 = critical_exponent_n0(Constants::canonical(), 1);
    REQUIRE_FALSE(n0.representable);
    REQUIRE(n0.log_n0 > 1e20);
  }
}

TEST_CASE("induction hypotheses") {
  auto c = trace_constants();
  auto led = trace_ledger();
  std::int64_t n = 9'000'000'000'001;
  SECTION("the tuned toy ledger passes all assumptions at nu0 = 30") {
    auto rep = check_induction_hypotheses(led, n, n, c, 30);
    REQUIRE(rep.overall);
    for (auto& ch : rep.checks) REQUIRE(ch.pass);
  }
  SECTION("even n fails oddness") {
    auto rep = check_induction_hypotheses(led, n - 1, n - 1, c, 30);
    REQUIRE_FALSE(rep.overall);
    REQUIRE(rep.checks[0].name == "n odd");
    REQUIRE_FALSE(rep.checks[0].pass);
  }
  SECTION("e = 1 divides everything") {
    auto rep = check_induction_hypotheses(led, n, n, c, 30);
    bool found = false;
    for (auto& ch : rep.checks)
      if (ch.name == "e divides n") {
        REQUIRE(ch.pass);
        found = true;
      }
    REQUIRE(found);
  }
  SECTION("unsound bound flags are rejected") {
    auto bad = led;
    bad.A_bound = Bound::Lower;
    REQUIRE_THROWS_AS(check_induction_hypotheses(bad, n, n, c, 30), error);
  }
  SECTION("rinj below the requirement fails assumption 4") {
    auto weak = led;
    weak.rinj = LogValue::from_linear(1e-12);
    auto rep = check_induction_hypotheses(weak, n, n, c, 30);
    REQUIRE_FALSE(rep.overall);
  }
}

TEST_CASE("ledger propagation") {
  auto c = trace_constants();
  auto led = trace_ledger();
  std::int64_t n = 9'000'000'000'001;
  double S = M_PI * std::sinh(2 * c.L_S * c.delta1);  // pi sinh(10)

  SECTION("A' - A = (nu+4) pi sinh(2 L_S delta1) exactly") {
    auto next = propagate_ledger(led, c, n, 30);
    double gained = next.A.linear() - led.A.linear();
    REQUIRE_THAT(gained, Catch::Matchers::WithinRel((led.nu + 4) * S, 1e-9));
    REQUIRE(next.delta == c.delta1);
    REQUIRE(next.e == led.e);
    REQUIRE(next.nu == led.nu);
  }
  SECTION("double application adds the increment twice") {
    auto l1 = propagate_ledger(led, c, n, 30);
    auto l2 = propagate_ledger(l1, c, n, 30);
    REQUIRE_THAT(l2.A.linear(), Catch::Matchers::WithinRel(2 * (led.nu + 4) * S, 1e-9));
  }
  SECTION("soundness direction per step: nu' <= nu, e' | e, A' >= A") {
    auto next = propagate_ledger(led, c, n, 30);
    REQUIRE(next.nu <= led.nu);
    REQUIRE(led.e % next.e == 0);
    REQUIRE(next.A >= led.A);
    REQUIRE(next.rinj_bound == Bound::Lower);
  }
  SECTION("rinj follows the corollary formula min{kappa rinj / 8, delta1}") {
    auto next = propagate_ledger(led, c, n, 30);
    double kappa = 2 * c.rho0 / (M_PI * std::sinh(c.rho0));
    REQUIRE_THAT(next.rinj.linear(),
                 Catch::Matchers::WithinRel(std::min(kappa * 0.01 / 8, c.delta1), 1e-9));
  }
  SECTION("failed hypotheses reject propagation") {
    REQUIRE_THROWS_WITH(propagate_ledger(led, c, 100, 30),
                        Catch::Matchers::ContainsSubstring("hypotheses failed"));
  }
}

TEST_CASE("trivialization step") {
  SECTION("lambda = 0.5, l0 = 8, rinj = 1: step 4 (strict descent below rinj)") {
    REQUIRE(trivialization_step(8.0, 1.0, 0.5) == 4);
  }
  SECTION("closed form matches off the boundary") {
    for (auto [l0, rinj, lam] : {std::tuple{8.0, 1.0, 0.4}, {100.0, 0.3, 0.7}, {5.0, 4.0, 0.5}}) {
      int k = trivialization_step(l0, rinj, lam);
      int formula = static_cast<int>(std::ceil(std::log(l0 / rinj) / std::log(1 / lam)));
      double boundary = std::pow(lam, formula) * l0;
      if (boundary < rinj - 1e-12) REQUIRE(k == formula);
    }
  }
}

TEST_CASE("quotient iteration trace") {
  auto c = trace_constants();
  auto led = trace_ledger();
  std::int64_t n = 9'000'000'000'001;

  SECTION("steps = 0 returns just the initial ledger") {
    auto tr = quotient_iteration_trace(led, n, 0, c, 0.0, 30);
    REQUIRE(tr.steps.size() == 1);
    REQUIRE_FALSE(tr.truncated_because.has_value());
  }
  SECTION("golden 5-step run: arithmetic oracle agreement") {
    auto tr = quotient_iteration_trace(led, n, 5, c, 8.0, 30);
    REQUIRE(tr.steps.size() == 6);
    REQUIRE_FALSE(tr.truncated_because.has_value());
    // oracle: A_k = k (nu+4) S, rinj_{k+1} = min(kappa rinj_k / 8, delta1)
    double S = M_PI * std::sinh(10.0);
    double kappa = 2.0 / (M_PI * std::sinh(1.0));
    double rinj = 0.01;
    for (int k = 0; k <= 5; ++k) {
      double A = tr.steps[static_cast<std::size_t>(k)].ledger.A.linear();
      if (k == 0)
        REQUIRE(A == 0.0);
      else
        REQUIRE_THAT(A, Catch::Matchers::WithinRel(k * 5 * S, 1e-9));
      REQUIRE_THAT(tr.steps[static_cast<std::size_t>(k)].ledger.rinj.linear(),
                   Catch::Matchers::WithinRel(rinj, 1e-9));
      rinj = std::min(kappa * rinj / 8, 0.01);
    }
    // stable length decays geometrically by lambda_n
    double lam = std::exp(lambda_n(n, c).lg);
    for (int k = 1; k <= 5; ++k)
      REQUIRE_THAT(tr.steps[static_cast<std::size_t>(k)].log_stable_length -
                       tr.steps[static_cast<std::size_t>(k - 1)].log_stable_length,
                   Catch::Matchers::WithinAbs(std::log(lam), 1e-12));
    // trivialization at the first step and the ceil formula agrees
    REQUIRE(tr.trivialization_at == 1);
    REQUIRE(trivialization_step(8.0, 0.01, lam) == 1);
  }
  SECTION("a ledger that cannot sustain the A bound truncates with the failing assumption") {
    auto tr = quotient_iteration_trace(led, n, 10, c, 0.0, 5);
    // nu0 = 5 bounds A by 10 S; the additive growth of 5 S per step exhausts it
    REQUIRE(tr.truncated_because.has_value());
    REQUIRE_THAT(*tr.truncated_because, Catch::Matchers::ContainsSubstring("A <="));
    REQUIRE(tr.steps.size() < 11);
  }
}

TEST_CASE("kappa_mcg_style") {
  REQUIRE(kappa_mcg_style(1, 6) == 6);
  REQUIRE(kappa_mcg_style(6, 4) == 12);
  REQUIRE(kappa_mcg_style(1, 1) == 1);
  REQUIRE_THROWS_AS(kappa_mcg_style(0, 1), error);
}
