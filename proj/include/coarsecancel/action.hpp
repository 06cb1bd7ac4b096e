#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarsecancel/geodesy.hpp"
#include "coarsecancel/metric_space.hpp"

namespace ccl {

// Distance-preserving partial injection of the point set.
struct PartialIsometry {
  std::string name;
  std::vector<int> map;  // map[i] = image index, -1 where undefined

  bool defined(int i) const { return map[static_cast<std::size_t>(i)] >= 0; }
  int operator()(int i) const { return map[static_cast<std::size_t>(i)]; }

  void validate(const FiniteMetricSpace& X, double tol = kDefaultTol) const {
    if (static_cast<int>(map.size()) != X.size()) throw error("PartialIsometry: size mismatch");
    std::vector<bool> hit(static_cast<std::size_t>(X.size()), false);
    for (int i = 0; i < X.size(); ++i) {
      int gi = map[static_cast<std::size_t>(i)];
      if (gi < 0) continue;
      if (gi >= X.size()) throw error("PartialIsometry: image out of range");
      if (hit[static_cast<std::size_t>(gi)]) throw error("PartialIsometry " + name + ": not injective");
      hit[static_cast<std::size_t>(gi)] = true;
    }
    for (int i = 0; i < X.size(); ++i)
      for (int j = i + 1; j < X.size(); ++j) {
        if (!defined(i) || !defined(j)) continue;
        if (std::fabs(X.d(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) - X.d(i, j)) > tol)
          throw error("PartialIsometry " + name + ": not an isometry on its domain");
      }
  }

  PartialIsometry inverted(const std::string& nm) const {
    PartialIsometry inv;
    inv.name = nm;
    inv.map.assign(map.size(), -1);
    for (std::size_t i = 0; i < map.size(); ++i)
      if (map[i] >= 0) inv.map[static_cast<std::size_t>(map[i])] = static_cast<int>(i);
    return inv;
  }
};

struct Letter {
  int gen;
  int exp;  // +1 or -1
  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};
using Word = std::vector<Letter>;

inline Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->exp});
  return out;
}

inline Word word_concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Word word_power(const Word& w, int k) {
  Word base = k < 0 ? word_inverse(w) : w;
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

inline std::string word_key(const Word& w) {
  std::string s;
  for (auto& l : w) {
    s += std::to_string(l.gen);
    s += l.exp > 0 ? '+' : '-';
  }
  return s;
}

// A finite set of partial isometries standing in for a group action; every
// result derived from it is window-certified unless the window carries
// extra structure (tree windows built from amalgams are exact).
class ActionWindow {
public:
  ActionWindow(FiniteMetricSpace space, std::vector<PartialIsometry> gens, int max_word_length,
               bool tree_window = false)
      : space_(std::move(space)),
        gens_(std::move(gens)),
        max_word_length_(max_word_length),
        tree_window_(tree_window),
        cache_(std::make_shared<Cache>()) {
    for (auto& g : gens_) {
      g.validate(space_);
      invs_.push_back(g.inverted(g.name + "'"));
    }
    total_ = true;
    for (auto& g : gens_)
      for (int i = 0; i < space_.size(); ++i)
        if (!g.defined(i)) {
          total_ = false;
          break;
        }
  }

  const FiniteMetricSpace& space() const { return space_; }
  int generator_count() const { return static_cast<int>(gens_.size()); }
  const PartialIsometry& generator(int i) const { return gens_[static_cast<std::size_t>(i)]; }
  int generator_index(const std::string& name) const {
    for (int i = 0; i < generator_count(); ++i)
      if (gens_[static_cast<std::size_t>(i)].name == name) return i;
    throw error("ActionWindow: unknown generator " + name);
  }
  int max_word_length() const { return max_word_length_; }
  bool total_action() const { return total_; }
  bool tree_window() const { return tree_window_; }

  // optional exact element oracle (normal forms on amalgam windows)
  void set_element_key(std::function<std::string(const Word&)> fn) { element_key_ = std::move(fn); }
  bool has_exact_elements() const { return static_cast<bool>(element_key_); }

  int apply_letter(const Letter& l, int x) const {
    const PartialIsometry& g = l.exp > 0 ? gens_[static_cast<std::size_t>(l.gen)] : invs_[static_cast<std::size_t>(l.gen)];
    return g.defined(x) ? g(x) : -1;
  }

  // w = l1 l2 ... lm acts by l1(l2(...lm(x)))
  int apply_word(const Word& w, int x) const {
    int cur = x;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      cur = apply_letter(*it, cur);
      if (cur < 0) return -1;
    }
    return cur;
  }

  const PartialIsometry& word_map(const Word& w) const {
    std::string key = word_key(w);
    {
      std::lock_guard<std::mutex> lk(cache_->mu);
      auto it = cache_->maps.find(key);
      if (it != cache_->maps.end()) return *it->second;
    }
    auto pi = std::make_shared<PartialIsometry>();
    pi->name = key;
    pi->map.assign(static_cast<std::size_t>(space_.size()), -1);
    for (int x = 0; x < space_.size(); ++x) pi->map[static_cast<std::size_t>(x)] = apply_word(w, x);
    std::lock_guard<std::mutex> lk(cache_->mu);
    auto [it, inserted] = cache_->maps.emplace(key, pi);
    (void)inserted;
    return *it->second;
  }

  // Canonical element key: normal form when available, else the action
  // signature (window approximation, identical maps are identified).
  std::string element_key(const Word& w) const {
    if (element_key_) return element_key_(w);
    const PartialIsometry& m = word_map(w);
    std::string s;
    for (int v : m.map) {
      s += std::to_string(v);
      s += ',';
    }
    return s;
  }

  // Word acting as the identity everywhere it is defined (with non-empty
  // domain); the window surrogate for triviality.
  bool acts_as_identity(const Word& w) const {
    const PartialIsometry& m = word_map(w);
    bool any = false;
    for (int x = 0; x < space_.size(); ++x) {
      if (!m.defined(x)) continue;
      any = true;
      if (m(x) != x) return false;
    }
    return any;
  }

  Word parse_word(const std::string& text) const {
    Word w;
    if (text.empty() || text == "1" || text == "e") return w;
    if (text.find(',') != std::string::npos) {
      std::size_t pos = 0;
      while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        std::string tok = text.substr(pos, next - pos);
        pos = next + 1;
        if (tok.empty()) continue;
        int exp = 1;
        if (tok.size() > 1 && (tok.back() == '\'' || tok.back() == '!')) {
          exp = -1;
          tok.pop_back();
        }
        w.push_back({generator_index(tok), exp});
      }
      return w;
    }
    for (char c : text) {
      std::string one(1, c);
      bool found = false;
      for (int i = 0; i < generator_count(); ++i)
        if (gens_[static_cast<std::size_t>(i)].name == one) {
          w.push_back({i, 1});
          found = true;
          break;
        }
      if (found) continue;
      std::string lower(1, static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      for (int i = 0; i < generator_count(); ++i)
        if (gens_[static_cast<std::size_t>(i)].name == lower) {
          w.push_back({i, -1});
          found = true;
          break;
        }
      if (!found) throw error("parse_word: unknown generator letter '" + one + "'");
    }
    return w;
  }

private:
  struct Cache {
    std::mutex mu;
    std::unordered_map<std::string, std::shared_ptr<const PartialIsometry>> maps;
  };

  FiniteMetricSpace space_;
  std::vector<PartialIsometry> gens_, invs_;
  int max_word_length_;
  bool tree_window_;
  bool total_ = false;
  std::function<std::string(const Word&)> element_key_;
  std::shared_ptr<Cache> cache_;
};

struct TranslationLength {
  double value = 0.0;
  bool window_bound = false;  // true when the domain is a proper window
  int attained_at = -1;
};

inline TranslationLength translation_length(const ActionWindow& W, const Word& w) {
  const PartialIsometry& m = W.word_map(w);
  TranslationLength out;
  double best = std::numeric_limits<double>::infinity();
  bool partial = false;
  for (int x = 0; x < W.space().size(); ++x) {
    if (!m.defined(x)) {
      partial = true;
      continue;
    }
    double d = W.space().d(m(x), x);
    if (d < best - kDefaultTol) {
      best = d;
      out.attained_at = x;
    }
  }
  if (out.attained_at < 0) throw error("window too small for word '" + word_key(w) + "'");
  out.value = best;
  out.window_bound = partial;
  return out;
}

struct StableLength {
  double value = 0.0;
  bool exact = false;     // tree windows with consistent power growth
  bool window_bound = false;
  int largest_power = 0;
  std::vector<std::pair<int, double>> diagnostics;  // (k, len(w^k)/k)
};

inline StableLength stable_translation_length(const ActionWindow& W, const Word& w,
                                              int max_power = 8) {
  StableLength out;
  std::vector<double> lens;
  for (int k = 1; k <= max_power; ++k) {
    Word wk = word_power(w, k);
    const PartialIsometry& m = W.word_map(wk);
    double best = std::numeric_limits<double>::infinity();
    for (int x = 0; x < W.space().size(); ++x)
      if (m.defined(x)) best = std::min(best, W.space().d(m(x), x));
    if (std::isinf(best)) break;
    lens.push_back(best);
    out.diagnostics.push_back({k, best / k});
  }
  if (lens.size() < 2) {
    if (W.total_action() && lens.size() == 1) {
      // bounded orbits on a finite total action: stable length 0
      out.value = 0.0;
      out.exact = true;
      out.largest_power = 1;
      return out;
    }
    throw error("stable_translation_length: no composable power >= 2");
  }
  int n = static_cast<int>(lens.size());
  out.largest_power = n;
  out.value = lens[static_cast<std::size_t>(n - 1)] / n;
  out.window_bound = !W.total_action();
  if (W.total_action()) {
    out.value = 0.0;  // finite orbits on a total finite action
    out.exact = true;
  } else if (W.tree_window()) {
    // on trees len(w^k) = k len(w) for loxodromics and 0 for elliptics
    bool linear = true;
    for (int k = 1; k <= n; ++k)
      if (std::fabs(lens[static_cast<std::size_t>(k - 1)] - k * lens[0]) > kDefaultTol) linear = false;
    if (linear) {
      out.value = lens[0];
      out.exact = true;
    }
  }
  return out;
}

struct IsometryClassification {
  enum class Kind { Elliptic, LoxodromicEstimate };
  Kind kind = Kind::Elliptic;
  double len = 0.0;
  double stable_len = 0.0;
  bool window_bound = false;
  std::string certificate;
};

// Elliptic when some power nearly fixes a point (or the action is total on
// the finite window); loxodromic-estimate when displacement of powers grows
// linearly. Sublinear-but-unbounded growth cannot be decided at window
// scale and raises inconclusive.
inline IsometryClassification classify(const ActionWindow& W, const Word& w, int max_power = 8,
                                       double tol = kDefaultTol) {
  IsometryClassification out;
  TranslationLength t1 = translation_length(W, w);
  out.len = t1.value;
  out.window_bound = t1.window_bound;
  std::vector<double> lens;
  for (int k = 1; k <= max_power; ++k) {
    Word wk = word_power(w, k);
    const PartialIsometry& m = W.word_map(wk);
    double best = std::numeric_limits<double>::infinity();
    for (int x = 0; x < W.space().size(); ++x)
      if (m.defined(x)) best = std::min(best, W.space().d(m(x), x));
    if (std::isinf(best)) break;
    lens.push_back(best);
    if (best <= tol) {
      out.kind = IsometryClassification::Kind::Elliptic;
      out.stable_len = 0.0;
      out.certificate = "power " + std::to_string(k) + " fixes a point";
      return out;
    }
  }
  if (W.total_action()) {
    out.kind = IsometryClassification::Kind::Elliptic;
    out.stable_len = 0.0;
    out.certificate = "total action on a finite space has bounded orbits";
    return out;
  }
  int n = static_cast<int>(lens.size());
  if (n < 2)
    throw inconclusive_error("inconclusive: window too small to distinguish (only " +
                             std::to_string(n) + " composable powers)");
  bool increasing = true;
  for (int k = 1; k < n; ++k)
    if (lens[static_cast<std::size_t>(k)] < lens[static_cast<std::size_t>(k - 1)] + tol) increasing = false;
  double slope = lens[static_cast<std::size_t>(n - 1)] / n;
  if (increasing && slope > tol) {
    out.kind = IsometryClassification::Kind::LoxodromicEstimate;
    out.stable_len = slope;
    if (W.tree_window() && std::fabs(lens[0] - slope) <= tol) out.stable_len = lens[0];
    out.certificate = "displacement grows linearly over " + std::to_string(n) +
                      " powers (slope " + std::to_string(slope) + ")";
    return out;
  }
  throw inconclusive_error("inconclusive: displacement neither returns to zero nor grows linearly within window");
}

inline bool is_loxodromic_estimate(const ActionWindow& W, const Word& w, int max_power = 8) {
  try {
    return classify(W, w, max_power).kind == IsometryClassification::Kind::LoxodromicEstimate;
  } catch (const inconclusive_error&) {
    return false;
  }
}

// Axis A_g = {x : d(gx, x) < len g + 8 delta}. The defining inequality is
// strict, so at delta = 0 the closure keeps the displacement minimizers in
// (the spec's non-emptiness guarantee).
inline SubsetHandle axis(const ActionWindow& W, const Word& w, double delta,
                         double tol = kDefaultTol) {
  TranslationLength len = translation_length(W, w);
  const PartialIsometry& m = W.word_map(w);
  std::vector<int> out;
  for (int x = 0; x < W.space().size(); ++x) {
    if (!m.defined(x)) continue;
    double d = W.space().d(m(x), x);
    if (d < len.value + 8 * delta - tol || d <= len.value + tol) out.push_back(x);
  }
  return SubsetHandle::of(std::move(out));
}

struct Nerve {
  DiscretePath path;
  double fundamental_length = 0.0;
  int periods = 0;
};

namespace detail {

inline std::vector<int> geodesic_vertices(const FiniteMetricSpace& X, int u, int v) {
  // walk back from v along the shortest-path tree of u; deterministic
  // smallest-index tie-break
  auto adj = adjacency(X.size(), X.edges());
  auto du = dijkstra(X.size(), adj, u);
  std::vector<int> rev{v};
  int cur = v;
  while (cur != u) {
    int best = -1;
    for (auto [p, w] : adj[static_cast<std::size_t>(cur)]) {
      if (std::fabs(du[static_cast<std::size_t>(p)] + w - du[static_cast<std::size_t>(cur)]) <= kDefaultTol)
        if (best < 0 || p < best) best = p;
    }
    if (best < 0) throw error("geodesic_vertices: no edge path (space not graph-backed?)");
    rev.push_back(best);
    cur = best;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace detail

// l-nerve: a periodic-within-window path through a minimal displacement
// point, concatenating geodesics x -> gx -> g^2 x ...
inline Nerve nerve(const ActionWindow& W, const Word& w, double l) {
  IsometryClassification cls = classify(W, w);
  if (cls.kind != IsometryClassification::Kind::LoxodromicEstimate)
    throw error("nerve: word is not loxodromic");
  TranslationLength tl = translation_length(W, w);
  int x0 = tl.attained_at;
  double T = tl.value;
  if (!(T >= cls.len - kDefaultTol && T < cls.len + std::max(l, kDefaultTol)))
    throw error("nerve: no fundamental segment with len <= T < len + l");
  Nerve out;
  out.fundamental_length = T;
  std::vector<int> pts{x0};
  int cur = x0;
  const FiniteMetricSpace& X = W.space();
  for (;;) {
    int nxt = W.apply_word(w, cur);
    if (nxt < 0) break;
    auto seg = detail::geodesic_vertices(X, cur, nxt);
    pts.insert(pts.end(), seg.begin() + 1, seg.end());
    ++out.periods;
    cur = nxt;
  }
  if (out.periods < 1) throw error("nerve: window exhausted before one period");
  out.path = DiscretePath::from_points(X, std::move(pts));
  return out;
}

struct Cylinder {
  SubsetHandle members;
  std::string note;  // outer approximation
};

// Computable outer realization: Y_g sits inside the 38 delta-neighborhood
// of the axis.
inline Cylinder cylinder(const ActionWindow& W, const Word& w, double delta) {
  if (!is_loxodromic_estimate(W, w)) throw error("cylinder: word is not loxodromic");
  SubsetHandle ax = axis(W, w, delta);
  return Cylinder{neighborhood(W.space(), ax, 38 * delta),
                  "outer approximation: 38*delta neighborhood of the axis"};
}

struct LoxodromicPair {
  Word word;  // g^-1 h
  double disp_g = 0.0, disp_h = 0.0, product = 0.0;  // certificate numbers
};

// Displacement criterion producing a loxodromic product from two
// non-loxodromic isometries.
inline std::optional<LoxodromicPair> find_loxodromic_pair(const ActionWindow& W, const Word& g,
                                                          const Word& h, int x, double delta) {
  int gx = W.apply_word(g, x), hx = W.apply_word(h, x);
  if (gx < 0 || hx < 0) throw error("find_loxodromic_pair: basepoint not in word domains");
  const FiniteMetricSpace& X = W.space();
  double dg = X.d(gx, x), dh = X.d(hx, x);
  double p = X.gromov(gx, hx, x);
  if (dg < 2 * p + 6 * delta - kDefaultTol) return std::nullopt;
  if (dh < 2 * p + 6 * delta - kDefaultTol) return std::nullopt;
  Word prod = word_concat(word_inverse(g), h);
  if (W.acts_as_identity(prod)) return std::nullopt;
  return LoxodromicPair{prod, dg, dh, p};
}

// Ping-pong criterion: strict Gromov-product inequalities at x certify that
// the words generate a free group of the given rank. Degenerate inputs
// (trivial or coinciding generators) fail the pairing and return false.
inline bool free_subgroup_certificate(const ActionWindow& W, const std::vector<Word>& gens, int x,
                                      double delta) {
  const FiniteMetricSpace& X = W.space();
  std::vector<int> gx, gix;
  for (auto& g : gens) {
    if (W.acts_as_identity(g)) return false;
    int a = W.apply_word(g, x), b = W.apply_word(word_inverse(g), x);
    if (a < 0 || b < 0) throw error("free_subgroup_certificate: basepoint not in domains");
    gx.push_back(a);
    gix.push_back(b);
  }
  int r = static_cast<int>(gens.size());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int eps : {+1, -1}) {
        if (i == j && eps == +1) continue;  // g^-1 g is trivially exempt
        Word prod = word_concat(eps > 0 ? word_inverse(gens[static_cast<std::size_t>(i)]) : gens[static_cast<std::size_t>(i)],
                                gens[static_cast<std::size_t>(j)]);
        if (W.acts_as_identity(prod)) return false;  // duplicate or involutive pairing
        double lhs = 2 * X.gromov(eps > 0 ? gx[static_cast<std::size_t>(i)] : gix[static_cast<std::size_t>(i)],
                                  gx[static_cast<std::size_t>(j)], x);
        double rhs = std::min(X.d(gx[static_cast<std::size_t>(i)], x), X.d(gx[static_cast<std::size_t>(j)], x)) + delta;
        if (!(lhs < rhs - kDefaultTol)) return false;
      }
  return true;
}

// Three displacement hypotheses certifying that <u, v> is non-elementary.
inline bool non_elementary_pair_certificate(const ActionWindow& W, const Word& u, const Word& v,
                                            int x, double A, double delta) {
  const FiniteMetricSpace& X = W.space();
  int ux = W.apply_word(u, x), vx = W.apply_word(v, x);
  int uix = W.apply_word(word_inverse(u), x), vix = W.apply_word(word_inverse(v), x);
  if (ux < 0 || vx < 0 || uix < 0 || vix < 0)
    throw error("non_elementary_pair_certificate: u^{±1}, v^{±1} must be composable at x");
  double du = X.d(ux, x), dv = X.d(vx, x);
  for (int a : {ux, uix})
    for (int b : {vx, vix})
      if (!(2 * X.gromov(a, b, x) < std::min(du, dv) - A - 6 * delta - kDefaultTol)) return false;
  if (!(2 * X.gromov(ux, uix, x) < du + A - kDefaultTol)) return false;
  if (!(2 * X.gromov(vx, vix, x) < dv + A - kDefaultTol)) return false;
  return true;
}

struct AcylindricityRow {
  double d = 0.0;
  int count = 0;  // N(d)
};

struct AcylindricityTable {
  double l = 0.0;
  int word_cap = 0;
  int elements = 0;
  bool exact_elements = false;  // normal-form dedup vs action-signature dedup
  std::vector<AcylindricityRow> rows;  // ascending in d, N non-increasing
};

// Reduced words up to the cap, deduplicated to elements via the window's
// element key. Deterministic BFS order.
inline std::vector<Word> enumerate_elements(const ActionWindow& W, int cap) {
  std::vector<Word> out;
  std::map<std::string, bool> seen;
  Word empty;
  seen[W.element_key(empty)] = true;
  out.push_back(empty);
  std::vector<Word> frontier{empty};
  for (int len = 1; len <= cap; ++len) {
    std::vector<Word> next;
    for (auto& w : frontier) {
      for (int g = 0; g < W.generator_count(); ++g)
        for (int e : {+1, -1}) {
          if (!w.empty() && w.back().gen == g && w.back().exp == -e) continue;
          Word w2 = w;
          w2.push_back({g, e});
          std::string key = W.element_key(w2);
          if (seen.emplace(key, true).second) {
            out.push_back(w2);
            next.push_back(w2);
          } else {
            next.push_back(w2);  // still extendable: a longer reduced word may reach new elements
          }
        }
    }
    frontier = std::move(next);
  }
  return out;
}

// N(d): over pairs at distance >= d, the largest number of elements moving
// both points by at most l.
inline AcylindricityTable acylindricity_table(const ActionWindow& W, double l,
                                              int word_cap = -1, double tol = kDefaultTol) {
  if (l < 0) throw error("acylindricity_table: l must be >= 0");
  AcylindricityTable out;
  out.l = l;
  out.word_cap = word_cap < 0 ? W.max_word_length() : word_cap;
  out.exact_elements = W.has_exact_elements();
  auto elements = enumerate_elements(W, out.word_cap);
  out.elements = static_cast<int>(elements.size());
  int n = W.space().size();
  std::vector<std::vector<int>> fixsets;
  fixsets.reserve(elements.size());
  for (auto& w : elements) {
    const PartialIsometry& m = W.word_map(w);
    std::vector<int> f;
    for (int x = 0; x < n; ++x)
      if (m.defined(x) && W.space().d(m(x), x) <= l + tol) f.push_back(x);
    fixsets.push_back(std::move(f));
  }
  std::vector<int> count(static_cast<std::size_t>(n) * n, 0);
  for (auto& f : fixsets)
    for (int a : f)
      for (int b : f) ++count[static_cast<std::size_t>(a) * n + b];

  // realized distances, ascending
  std::vector<double> dvals;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) dvals.push_back(W.space().d(a, b));
  std::sort(dvals.begin(), dvals.end());
  dvals.erase(std::unique(dvals.begin(), dvals.end(),
                          [&](double x, double y) { return std::fabs(x - y) <= tol; }),
              dvals.end());

  struct PairRec {
    double d;
    int c;
  };
  std::vector<PairRec> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      pairs.push_back({W.space().d(a, b), count[static_cast<std::size_t>(a) * n + b]});
  std::sort(pairs.begin(), pairs.end(), [](const PairRec& x, const PairRec& y) { return x.d > y.d; });

  std::size_t pi = 0;
  int running = 0;
  for (auto it = dvals.rbegin(); it != dvals.rend(); ++it) {
    double d = *it;
    while (pi < pairs.size() && pairs[pi].d >= d - tol) {
      running = std::max(running, pairs[pi].c);
      ++pi;
    }
    out.rows.push_back({d, running});
  }
  std::reverse(out.rows.begin(), out.rows.end());
  return out;
}

struct CharacteristicSet {
  std::vector<int> members;
  bool empty = false;
};

// C_H = {x : every h in H moves x by at most 11 delta}.
inline CharacteristicSet characteristic_set(const ActionWindow& W, const std::vector<Word>& H,
                                            double delta, double tol = kDefaultTol) {
  CharacteristicSet out;
  for (int x = 0; x < W.space().size(); ++x) {
    bool in = true;
    for (auto& h : H) {
      int hx = W.apply_word(h, x);
      if (hx < 0 || W.space().d(hx, x) > 11 * delta + tol) {
        in = false;
        break;
      }
    }
    if (in) out.members.push_back(x);
  }
  out.empty = out.members.empty();
  return out;
}

}  // namespace ccl
