#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarsecancel/action.hpp"
#include "coarsecancel/invariants.hpp"
#include "coarsecancel/logspace.hpp"

namespace ccl {

// Global constants of the theory. Canonical mode pins the published
// magnitudes (rho0 > 10^20 L_S bold, delta0/Delta0 < 10^-10 bold,
// delta1 = 64e4 bold); toy mode records arbitrary user values and is the
// only mode in which cone-offs are actually built.
struct Constants {
  double bold_delta = kBoldDeltaDefault;
  double L_S = 500.0;  // configured, never derived (no numeric value in the theory)
  double delta0 = 0.0;
  double Delta0 = 0.0;
  double rho0 = 0.0;
  double delta1 = 0.0;
  bool toy = true;

  static Constants canonical(double bold = kBoldDeltaDefault, double ls = 500.0) {
    Constants c;
    c.bold_delta = bold;
    c.L_S = ls;
    c.rho0 = 1e21 * ls * bold;
    c.delta0 = 1e-11 * bold;
    c.Delta0 = 1e-11 * bold;
    c.delta1 = 64e4 * bold;
    c.toy = false;
    c.validate();
    return c;
  }

  static Constants toy_mode(double bold, double ls, double delta0, double Delta0, double rho0,
                            double delta1) {
    Constants c;
    c.bold_delta = bold;
    c.L_S = ls;
    c.delta0 = delta0;
    c.Delta0 = Delta0;
    c.rho0 = rho0;
    c.delta1 = delta1;
    c.toy = true;
    c.validate();
    return c;
  }

  void validate() const {
    if (!(bold_delta > 0 && L_S > 0 && delta0 > 0 && Delta0 > 0 && rho0 > 0 && delta1 > 0))
      throw error("Constants: all constants must be positive");
    if (!toy) {
      if (!(rho0 > 1e20 * L_S * bold_delta))
        throw error("Constants: canonical mode requires rho0 > 10^20 L_S bold_delta");
      if (!(delta0 < 1e-10 * bold_delta && Delta0 < 1e-10 * bold_delta))
        throw error("Constants: canonical mode requires delta0, Delta0 < 10^-10 bold_delta");
      if (std::fabs(delta1 - 64e4 * bold_delta) > 1e-6 * bold_delta)
        throw error("Constants: canonical mode requires delta1 = 64e4 bold_delta");
    }
  }

  const char* mode() const { return toy ? "toy" : "canonical"; }
};

struct FamilyStats {
  double DeltaQ = 0.0;  // sup over distinct pairs of diam(Y1^{+5d} ∩ Y2^{+5d})
  double TQ = std::numeric_limits<double>::infinity();  // inf of rotation lengths
  std::pair<int, int> Delta_witness{-1, -1};
  std::string T_witness;
};

// Small cancellation statistics of a family of (subset, rotation words).
inline FamilyStats family_stats(const ActionWindow& W, const std::vector<SubsetHandle>& family,
                                const std::vector<std::vector<Word>>& rotations, double delta) {
  if (family.empty()) throw error("family_stats: empty family");
  FamilyStats out;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      auto inter = intersection_diameter(W.space(), {family[i], family[j]}, 5 * delta);
      double v = inter.empty ? 0.0 : inter.diameter;
      if (v > out.DeltaQ) {
        out.DeltaQ = v;
        out.Delta_witness = {static_cast<int>(i), static_cast<int>(j)};
      }
    }
  for (auto& words : rotations)
    for (auto& w : words) {
      double len = translation_length(W, w).value;
      if (len < out.TQ) {
        out.TQ = len;
        out.T_witness = word_key(w);
      }
    }
  return out;
}

struct CertCheck {
  std::string name;
  std::string lhs, rhs;  // human-readable, log-space aware
  bool pass = false;
};

struct Certificate {
  std::vector<CertCheck> checks;
  bool overall = false;
  std::string mode;
  std::vector<std::string> conclusions;  // licensed claims, recorded symbolically
};

namespace detail {

inline std::string show_log(LogValue v) {
  if (v.is_zero()) return "0";
  if (v.representable()) return std::to_string(v.linear());
  return "exp(" + std::to_string(v.lg) + ")";
}

}  // namespace detail

// The four hypotheses of the small cancellation theorem, evaluated in log
// space. A passing certificate records the theorem's conclusions as claims,
// never as computations.
inline Certificate certify_small_cancellation(double delta, double rho, const FamilyStats& stats,
                                              const Constants& c) {
  c.validate();
  Certificate cert;
  cert.mode = c.mode();
  auto add = [&](const std::string& name, LogValue lhs, LogValue rhs, bool pass) {
    cert.checks.push_back({name, detail::show_log(lhs), detail::show_log(rhs), pass});
  };
  LogValue ldelta = LogValue::from_linear(delta);
  LogValue ldelta0 = LogValue::from_linear(c.delta0);
  add("delta <= delta0", ldelta, ldelta0, ldelta <= ldelta0);
  LogValue lrho = LogValue::from_linear(rho);
  LogValue lrho0 = LogValue::from_linear(c.rho0);
  add("rho >= rho0", lrho, lrho0, lrho >= lrho0);
  LogValue lDelta = LogValue::from_linear(stats.DeltaQ);
  LogValue lDelta0 = LogValue::from_linear(c.Delta0);
  add("Delta(Q) <= Delta0", lDelta, lDelta0, lDelta <= lDelta0);
  LogValue lT = std::isinf(stats.TQ) ? LogValue::from_log(1e300) : LogValue::from_linear(stats.TQ);
  LogValue l8pi = LogValue::from_linear(8 * M_PI) * sinh_log(rho);
  add("T(Q) >= 8 pi sinh rho", lT, l8pi, lT >= l8pi);
  cert.overall = true;
  for (auto& ch : cert.checks) cert.overall = cert.overall && ch.pass;
  if (cert.overall) {
    cert.conclusions = {
        "cone-off is 900 bold_delta-hyperbolic",
        "quotient space is delta_bar-hyperbolic with delta_bar = 64e4 bold_delta",
        "quotient group acts by isometries on the quotient space",
        "stab(Y)/H embeds into the quotient for every family member",
    };
  }
  return cert;
}

// Rescaling parameter of the induction step:
// lambda_n = (4 pi / delta1) sqrt(2 sinh rho0 sinh(38 delta1) / (n L_S)).
inline LogValue lambda_n(std::int64_t n, const Constants& c) {
  if (n < 1) throw error("lambda_n: n must be >= 1");
  LogValue four_pi = LogValue::from_linear(4 * M_PI);
  LogValue inner = LogValue::from_linear(2.0) * sinh_log(c.rho0) * sinh_log(38 * c.delta1) /
                   (LogValue::from_linear(static_cast<double>(n)) * LogValue::from_linear(c.L_S));
  return four_pi / LogValue::from_linear(c.delta1) * inner.sqrt();
}

struct CriticalExponent {
  std::int64_t n0 = 0;          // valid when representable
  bool representable = false;
  double log_n0 = 0.0;          // log of the smallest admissible real threshold
  std::string binding;          // name of the binding constraint
};

namespace detail {

struct N0Constraints {
  // each constraint is lambda_n <= bound (one of them strict)
  std::vector<std::pair<std::string, LogValue>> bounds;
  std::vector<bool> strict;
};

inline N0Constraints n0_constraints(const Constants& c, int nu0) {
  N0Constraints out;
  LogValue S = LogValue::from_linear(M_PI) * sinh_log(2 * c.L_S * c.delta1);
  // (1) lambda_n delta1 <= delta0
  out.bounds.push_back({"lambda delta1 <= delta0",
                        LogValue::from_linear(c.delta0) / LogValue::from_linear(c.delta1)});
  out.strict.push_back(false);
  // (2) lambda_n ((nu0+5) pi sinh(2 L_S delta1) + 90 delta1) <= min{Delta0, pi sinh(2 L_S delta1)}
  LogValue coeff = LogValue::from_linear(static_cast<double>(nu0) + 5) * S +
                   LogValue::from_linear(90 * c.delta1);
  LogValue rhs2 = std::min(LogValue::from_linear(c.Delta0), S);
  out.bounds.push_back({"lambda ((nu0+5) pi sinh(2 L_S delta1) + 90 delta1) <= min{Delta0, pi sinh(2 L_S delta1)}",
                        rhs2 / coeff});
  out.strict.push_back(false);
  // (3) lambda L_S delta1^2 / (4 pi sinh(38 delta1)) < delta1   [strict]
  LogValue coeff3 = LogValue::from_linear(c.L_S * c.delta1 * c.delta1 / (4 * M_PI)) /
                    sinh_log(38 * c.delta1);
  out.bounds.push_back({"lambda L_S delta1^2 / (4 pi sinh(38 delta1)) < delta1",
                        LogValue::from_linear(c.delta1) / coeff3});
  out.strict.push_back(true);
  // (4) lambda rho0 <= rho0, i.e. lambda <= 1
  out.bounds.push_back({"lambda rho0 <= rho0", LogValue::from_linear(1.0)});
  out.strict.push_back(false);
  return out;
}

inline bool n0_ok(const N0Constraints& cs, LogValue lam, std::string* failing = nullptr) {
  for (std::size_t i = 0; i < cs.bounds.size(); ++i) {
    bool ok = cs.strict[i] ? lam < cs.bounds[i].second : lam <= cs.bounds[i].second;
    if (!ok) {
      if (failing) *failing = cs.bounds[i].first;
      return false;
    }
  }
  return true;
}

}  // namespace detail

// Smallest n >= 100 making the four induction-step inequalities hold; all
// are monotone in n (lambda_n decreases), so a doubling + binary search
// finds it exactly. With canonical constants the value exceeds any integer
// type and is reported in log space only.
inline CriticalExponent critical_exponent_n0(const Constants& c, int nu0) {
  if (nu0 < 0) throw error("critical_exponent_n0: nu0 must be >= 0");
  auto cs = detail::n0_constraints(c, nu0);
  CriticalExponent out;
  // closed form: n >= (4pi/delta1)^2 * 2 sinh rho0 sinh(38 delta1) / (L_S bound^2)
  LogValue base = LogValue::from_linear(16 * M_PI * M_PI / (c.delta1 * c.delta1)) *
                  LogValue::from_linear(2.0) * sinh_log(c.rho0) * sinh_log(38 * c.delta1) /
                  LogValue::from_linear(c.L_S);
  double worst_log_n = std::log(100.0);
  for (std::size_t i = 0; i < cs.bounds.size(); ++i) {
    LogValue need = base / (cs.bounds[i].second * cs.bounds[i].second);
    if (need.lg > worst_log_n) {
      worst_log_n = need.lg;
      out.binding = cs.bounds[i].first;
    }
  }
  out.log_n0 = worst_log_n;
  if (out.binding.empty()) out.binding = "n >= 100";
  if (worst_log_n > 42.0) {  // beyond int64
    out.representable = false;
    return out;
  }
  std::int64_t lo = 100, hi = 100;
  std::string failing;
  while (!detail::n0_ok(cs, lambda_n(hi, c), &failing)) {
    if (hi > (std::int64_t{1} << 61)) {
      out.representable = false;
      out.binding = failing;
      return out;
    }
    hi *= 2;
  }
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (detail::n0_ok(cs, lambda_n(mid, c), nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  out.n0 = lo;
  out.representable = true;
  return out;
}

struct HypothesisCheck {
  std::string name;
  std::string lhs, rhs;
  double log_margin = 0.0;  // log(rhs) - log(lhs) oriented so that >= 0 passes
  bool pass = false;
};

struct InductionReport {
  std::vector<HypothesisCheck> checks;
  bool overall = false;
  int nu0 = 0;
  std::vector<std::string> conclusions;
};

// RHS of induction assumption 4: delta1 sqrt(2 L_S sinh rho0 / (n1 sinh(38 delta1))).
inline LogValue rinj_requirement(std::int64_t n1, const Constants& c) {
  LogValue inner = LogValue::from_linear(2 * c.L_S) * sinh_log(c.rho0) /
                   (LogValue::from_linear(static_cast<double>(n1)) * sinh_log(38 * c.delta1));
  return LogValue::from_linear(c.delta1) * inner.sqrt();
}

// The induction-step hypotheses for exponent n: oddness, divisibility by e,
// nu <= nu0, the A bound and the rinj lower bound, plus the ambient
// delta1-hyperbolicity and the no-involution flag. nu0 defaults to the
// ledger's nu (the main proof's choice).
inline InductionReport check_induction_hypotheses(const InvariantLedger& ledger, std::int64_t n1,
                                                  std::int64_t n, const Constants& c,
                                                  int nu0 = -1) {
  c.validate();
  ledger.require_sound_for_certification();
  if (nu0 < 0) nu0 = ledger.nu;
  InductionReport rep;
  rep.nu0 = nu0;
  auto add = [&](const std::string& name, const std::string& lhs, const std::string& rhs,
                 double log_margin, bool pass) {
    rep.checks.push_back({name, lhs, rhs, log_margin, pass});
  };
  add("n odd", std::to_string(n), "odd", 0.0, n % 2 == 1);
  add("n >= n1 >= 100", std::to_string(n), ">= " + std::to_string(n1),
      static_cast<double>(n - n1), n >= n1 && n1 >= 100);
  add("e divides n", std::to_string(ledger.e), "| " + std::to_string(n), 0.0,
      n % ledger.e == 0);
  add("nu <= nu0", std::to_string(ledger.nu), "<= " + std::to_string(nu0), 0.0,
      ledger.nu <= nu0);
  add("delta <= delta1", std::to_string(ledger.delta), "<= " + std::to_string(c.delta1), 0.0,
      ledger.delta <= c.delta1 + kDefaultTol);
  add("no involution", ledger.no_involution ? "true" : "false", "true", 0.0,
      ledger.no_involution);
  {
    LogValue bound = LogValue::from_linear(static_cast<double>(nu0) + 5) *
                     LogValue::from_linear(M_PI) * sinh_log(2 * c.L_S * c.delta1);
    bool pass = ledger.A <= bound;
    add("A <= (nu0+5) pi sinh(2 L_S delta1)", detail::show_log(ledger.A),
        "<= " + detail::show_log(bound), bound.lg - ledger.A.lg, pass);
  }
  {
    LogValue req = rinj_requirement(n1, c);
    bool pass = ledger.rinj >= req;
    add("rinj >= delta1 sqrt(2 L_S sinh rho0 / (n1 sinh(38 delta1)))",
        detail::show_log(ledger.rinj), ">= " + detail::show_log(req),
        ledger.rinj.lg - req.lg, pass);
  }
  rep.overall = true;
  for (auto& ch : rep.checks) rep.overall = rep.overall && ch.pass;
  if (rep.overall)
    rep.conclusions = {
        "quotient acts on a delta1-hyperbolic length space, action WPD and non-elementary",
        "image of N has no involution and satisfies the same assumptions",
        "stable lengths contract by lambda_{n1} under the projection",
        "non-loxodromic elementary subgroups embed into the quotient",
    };
  return rep;
}

// Ledger propagation across one quotient step, exactly the per-step
// inequalities: delta' = delta1, e' | e, nu' <= nu,
// A' = A + (nu+4) pi sinh(2 L_S delta1), and the injectivity-radius
// corollary rinj' = min{kappa rinj / 8, delta1} with kappa = 2 rho0 / (pi sinh rho0).
inline InvariantLedger propagate_ledger(const InvariantLedger& ledger, const Constants& c,
                                        std::int64_t n, int nu0 = -1,
                                        std::optional<std::int64_t> n1 = std::nullopt) {
  std::int64_t n1v = n1.value_or(n);
  InductionReport rep = check_induction_hypotheses(ledger, n1v, n, c, nu0);
  if (!rep.overall) {
    std::string failed;
    for (auto& ch : rep.checks)
      if (!ch.pass) failed += (failed.empty() ? "" : ", ") + ch.name;
    throw error("propagate_ledger: hypotheses failed: " + failed);
  }
  InvariantLedger out = ledger;
  out.delta = c.delta1;
  out.e_bound = Bound::Exact;  // e' divides e; we keep e as the sound multiple
  out.nu_bound = Bound::Upper;
  LogValue add = LogValue::from_linear(static_cast<double>(ledger.nu) + 4) *
                 LogValue::from_linear(M_PI) * sinh_log(2 * c.L_S * c.delta1);
  out.A = ledger.A + add;
  out.A_bound = Bound::Upper;
  LogValue kappa = LogValue::from_linear(2 * c.rho0 / M_PI) / sinh_log(c.rho0);
  LogValue cand = kappa * ledger.rinj / LogValue::from_linear(8.0);
  out.rinj = std::min(cand, LogValue::from_linear(c.delta1));
  out.rinj_bound = Bound::Lower;
  out.provenance.push_back("delta' = delta1 (quotient hyperbolicity)");
  out.provenance.push_back("e' divides e (exponent divisibility)");
  out.provenance.push_back("nu' <= nu (non-increase)");
  out.provenance.push_back("A' = A + (nu+4) pi sinh(2 L_S delta1)");
  out.provenance.push_back("rinj' = min{kappa rinj/8, delta1}, kappa = 2 rho0 / (pi sinh rho0)");
  return out;
}

// Smallest k >= 0 with lambda^k l0 < rinj (strict), by iteration; the
// closed form ceil(log(l0/rinj)/log(1/lambda)) matches off the boundary.
inline int trivialization_step(double l0, double rinj, double lambda) {
  if (!(l0 > 0 && rinj > 0 && lambda > 0 && lambda < 1))
    throw error("trivialization_step: need l0, rinj > 0 and lambda in (0,1)");
  int k = 0;
  double cur = l0;
  while (cur >= rinj) {
    cur *= lambda;
    ++k;
    if (k > 100000) throw error("trivialization_step: runaway");
  }
  return k;
}

struct TraceStep {
  InvariantLedger ledger;
  double log_stable_length = 0.0;  // log of lambda^k l0
  bool below_rinj = false;
};

struct IterationTrace {
  std::vector<TraceStep> steps;  // steps[0] holds ledger0
  double log_lambda = 0.0;
  int trivialization_at = -1;  // first step with stable length < current rinj
  std::optional<std::string> truncated_because;
};

// Iterates check + propagate, tracking the geometric decay of an initial
// stable length against the (propagated) injectivity radius.
inline IterationTrace quotient_iteration_trace(const InvariantLedger& ledger0, std::int64_t n,
                                               int steps, const Constants& c, double l0 = 0.0,
                                               int nu0 = -1,
                                               std::optional<std::int64_t> n1 = std::nullopt) {
  if (steps < 0) throw error("quotient_iteration_trace: steps must be >= 0");
  IterationTrace out;
  LogValue lam = lambda_n(n1.value_or(n), c);
  out.log_lambda = lam.lg;
  InvariantLedger cur = ledger0;
  double log_len = l0 > 0 ? std::log(l0) : -std::numeric_limits<double>::infinity();
  for (int k = 0;; ++k) {
    TraceStep st;
    st.ledger = cur;
    st.log_stable_length = log_len;
    st.below_rinj = l0 > 0 && log_len < cur.rinj.lg;
    out.steps.push_back(st);
    if (out.trivialization_at < 0 && st.below_rinj) out.trivialization_at = k;
    if (k == steps) break;
    try {
      cur = propagate_ledger(cur, c, n, nu0, n1);
    } catch (const error& e) {
      out.truncated_because = e.what();
      break;
    }
    log_len += lam.lg;
  }
  return out;
}

// kappa of the mapping-class-group style statement: lcm of e and the index
// of the torsion-free normal subgroup.
inline std::int64_t kappa_mcg_style(std::int64_t e, std::int64_t index) {
  if (e < 1 || index < 1) throw error("kappa_mcg_style: arguments must be >= 1");
  return lcm64(e, index);
}

}  // namespace ccl
