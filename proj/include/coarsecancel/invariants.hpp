#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coarsecancel/action.hpp"
#include "coarsecancel/group_table.hpp"
#include "coarsecancel/logspace.hpp"

namespace ccl {

// The (delta, rinj, e, nu, A) tuple threaded through certification. Each
// numeric field carries the side of the truth it bounds; rinj and A are
// kept in log space so canonical-mode propagation stays finite.
struct InvariantLedger {
  double delta = 0.0;
  LogValue rinj = LogValue::zero();
  Bound rinj_bound = Bound::Lower;
  std::int64_t e = 1;
  Bound e_bound = Bound::Exact;
  int nu = 1;
  Bound nu_bound = Bound::Upper;
  LogValue A = LogValue::zero();
  Bound A_bound = Bound::Upper;
  bool no_involution = true;
  std::vector<std::string> provenance;

  void require_sound_for_certification() const {
    if (e_bound != Bound::Exact) throw error("ledger: e must be exact");
    if (nu_bound != Bound::Upper && nu_bound != Bound::Exact)
      throw error("ledger: nu must be an upper bound");
    if (A_bound != Bound::Upper && A_bound != Bound::Exact)
      throw error("ledger: A must be an upper bound");
    if (rinj_bound != Bound::Lower && rinj_bound != Bound::Exact)
      throw error("ledger: rinj must be a lower bound");
    if (e < 1 || nu < 1) throw error("ledger: e and nu must be >= 1");
  }
};

struct InjectivityRadius {
  double value = std::numeric_limits<double>::infinity();
  bool finite = false;
  Bound bound = Bound::Upper;  // restricted inf over capped words
  bool exact_for_cap = false;
  Word attained_by;
  int words_classified = 0;
  int inconclusive = 0;
};

// Min of stable translation lengths over loxodromic-classified words up to
// the cap. The true rinj is an inf over the whole group, so the capped
// value is an upper bound of the restricted inf; on tree windows the tree
// lengths make it exact for the capped set.
inline InjectivityRadius injectivity_radius(const ActionWindow& W, int word_cap,
                                            int max_power = 8) {
  if (word_cap < 1) throw error("injectivity_radius: word_cap must be >= 1");
  InjectivityRadius out;
  auto elements = enumerate_elements(W, word_cap);
  for (auto& w : elements) {
    if (w.empty()) continue;
    try {
      IsometryClassification c = classify(W, w, max_power);
      ++out.words_classified;
      if (c.kind != IsometryClassification::Kind::LoxodromicEstimate) continue;
      StableLength s = stable_translation_length(W, w, max_power);
      if (!out.finite || s.value < out.value - kDefaultTol) {
        out.value = s.value;
        out.attained_by = w;
        out.finite = true;
        out.exact_for_cap = s.exact;
      }
    } catch (const inconclusive_error&) {
      ++out.inconclusive;
    }
  }
  return out;
}

// e = lcm of exponents of Hol(F) over the supplied finite normal subgroups.
inline std::int64_t invariant_e(const std::vector<GroupTable>& finite_normal_subgroups,
                                int cap = 64) {
  std::int64_t e = 1;
  for (auto& f : finite_normal_subgroups) e = lcm64(e, group_exponent(holomorph(f, cap)));
  return e;
}

// A(g_1,...,g_m) = diam of the intersection of the 13 delta-thickened axes.
inline IntersectionDiameter overlap_A(const ActionWindow& W, const std::vector<Word>& words,
                                      double delta) {
  if (words.empty()) throw error("overlap_A: empty word list");
  std::vector<SubsetHandle> axes;
  for (auto& w : words) axes.push_back(axis(W, w, delta));
  return intersection_diameter(W.space(), axes, 13 * delta);
}

// Window surrogate for "generates an elementary subgroup": a common
// 11 delta-characteristic point (elliptic case), or on tree windows a
// shared axis preserved by every member (loxodromic case).
inline bool elementary_tuple_surrogate(const ActionWindow& W, const std::vector<Word>& words,
                                       double delta, int max_power = 8) {
  CharacteristicSet cs = characteristic_set(W, words, delta);
  if (!cs.empty) return true;
  std::vector<const Word*> lox;
  for (auto& w : words) {
    try {
      if (classify(W, w, max_power).kind == IsometryClassification::Kind::LoxodromicEstimate)
        lox.push_back(&w);
    } catch (const inconclusive_error&) {
    }
  }
  if (lox.empty()) return false;
  SubsetHandle ax0 = axis(W, *lox.front(), delta);
  for (auto* w : lox) {
    SubsetHandle ax = axis(W, *w, delta);
    if (!(ax.members == ax0.members)) return false;
  }
  // every word must map the shared axis into itself where defined
  for (auto& w : words) {
    const PartialIsometry& m = W.word_map(w);
    for (int x : ax0.members)
      if (m.defined(x) && !ax0.contains(m(x))) return false;
  }
  return true;
}

struct AEstimate {
  double value = 0.0;
  Bound bound = Bound::Lower;  // search over a finite tuple set
  std::int64_t tuples_examined = 0;
  std::int64_t tuples_qualifying = 0;
  std::vector<Word> attaining;
};

// Diagnostic search for A(G,X): sup of overlap_A over (nu+1)-tuples of
// short words that fail the elementary surrogates. A lower bound of the
// true sup by construction; certification must take A from structural
// arguments instead.
inline AEstimate invariant_A_estimate(const ActionWindow& W, int nu, double L_S, double delta,
                                      int word_cap = -1, int max_power = 8) {
  if (nu < 1) throw error("invariant_A_estimate: nu must be >= 1");
  AEstimate out;
  auto elements = enumerate_elements(W, word_cap < 0 ? W.max_word_length() : word_cap);
  std::vector<Word> eligible;
  for (auto& w : elements) {
    if (w.empty()) continue;
    try {
      if (translation_length(W, w).value <= L_S * delta + kDefaultTol) eligible.push_back(w);
    } catch (const error&) {
    }
  }
  int m = nu + 1;
  if (static_cast<int>(eligible.size()) < m) return out;  // 0, flagged lower
  std::vector<int> pick(static_cast<std::size_t>(m));
  // ordered combinations of distinct eligible words
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == m) {
      ++out.tuples_examined;
      std::vector<Word> tuple;
      for (int i : pick) tuple.push_back(eligible[static_cast<std::size_t>(i)]);
      if (elementary_tuple_surrogate(W, tuple, delta, max_power)) return;
      ++out.tuples_qualifying;
      auto ov = overlap_A(W, tuple, delta);
      double v = ov.empty ? 0.0 : ov.diameter;
      if (v > out.value + kDefaultTol) {
        out.value = v;
        out.attaining = tuple;
      }
      return;
    }
    for (int i = start; i < static_cast<int>(eligible.size()); ++i) {
      pick[static_cast<std::size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

struct OverlapMargin {
  std::vector<std::string> words;
  double overlap = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - overlap, must be >= 0
  std::string inequality;
};

struct OverlapBoundsReport {
  std::vector<OverlapMargin> margins;
  int filtered_elementary = 0;
  bool all_nonnegative = true;
};

// Checks the two-axes overlap bound and the tuple corollary on pairs or
// tuples certified non-elementary. A violated margin on a certified tuple
// indicates a surrogate or ledger error, so it is a hard failure flag.
inline OverlapBoundsReport verify_overlap_bounds(const ActionWindow& W,
                                                 const InvariantLedger& ledger,
                                                 const std::vector<std::vector<Word>>& samples,
                                                 double L_S, int max_power = 8) {
  OverlapBoundsReport rep;
  double delta = ledger.delta;
  double Aval = ledger.A.is_zero() ? 0.0 : ledger.A.linear();
  for (auto& tuple : samples) {
    if (tuple.empty()) continue;
    if (elementary_tuple_surrogate(W, tuple, delta, max_power)) {
      ++rep.filtered_elementary;
      continue;
    }
    auto ov = overlap_A(W, tuple, delta);
    double overlap = ov.empty ? 0.0 : ov.diameter;
    std::vector<std::string> names;
    for (auto& w : tuple) names.push_back(word_key(w));
    if (tuple.size() == 2) {
      double len_g = translation_length(W, tuple[0]).value;
      double len_h = translation_length(W, tuple[1]).value;
      if (len_g <= L_S * delta + kDefaultTol) {
        double bound = ledger.nu * len_h + Aval + 156 * delta;
        rep.margins.push_back({names, overlap, bound, bound - overlap, "A(g,h) <= nu len h + A + 156 delta"});
      } else {
        double bound = len_g + len_h + ledger.nu * std::max(len_g, len_h) + Aval + 684 * delta;
        rep.margins.push_back({names, overlap, bound, bound - overlap,
                               "A(g,h) <= len g + len h + nu max + A + 684 delta"});
      }
    } else {
      double sup = 0.0;
      for (auto& w : tuple) sup = std::max(sup, translation_length(W, w).value);
      double bound = (ledger.nu + 2) * sup + Aval + 684 * delta;
      rep.margins.push_back({names, overlap, bound, bound - overlap,
                             "A(g_1..g_m) <= (nu+2) sup len + A + 684 delta"});
    }
  }
  for (auto& m : rep.margins)
    if (m.margin < -kDefaultTol) rep.all_nonnegative = false;
  return rep;
}

struct NuBound {
  int bound = 0;
  double d_used = 0.0;
  int n_used = 0;
  int m_steps = 0;
};

// nu <= N + M where (d, N) is an acylindricity row at l = 166 delta and M
// is the least integer with M * rinj >= d. Minimizes over usable rows.
inline NuBound nu_bound_from_acylindricity(const AcylindricityTable& table, double rinj) {
  if (!(rinj > 0)) throw error("nu_bound_from_acylindricity: rinj must be positive");
  if (table.rows.empty()) throw error("nu_bound_from_acylindricity: empty table");
  std::optional<NuBound> best;
  for (auto& row : table.rows) {
    if (row.d <= 0) continue;
    int m = static_cast<int>(std::ceil(row.d / rinj - kDefaultTol));
    NuBound cand{row.count + m, row.d, row.count, m};
    if (!best || cand.bound < best->bound) best = cand;
  }
  if (!best) throw error("nu_bound_from_acylindricity: no row with d > 0");
  return *best;
}

// Least odd kappa divisible by e and by every listed elliptic order.
inline std::int64_t kappa_for_hyperbolic(const std::vector<std::int64_t>& elliptic_orders,
                                         std::int64_t e) {
  if (e < 1) throw error("kappa_for_hyperbolic: e must be >= 1");
  if (e % 2 == 0) throw error("kappa_for_hyperbolic: e must be odd (no-involution hypothesis)");
  std::int64_t k = e;
  for (auto o : elliptic_orders) {
    if (o < 1) throw error("kappa_for_hyperbolic: orders must be >= 1");
    if (o % 2 == 0)
      throw error("kappa_for_hyperbolic: even elliptic order " + std::to_string(o) +
                  " violates the no-involution hypothesis");
    k = lcm64(k, o);
  }
  return k;
}

}  // namespace ccl
