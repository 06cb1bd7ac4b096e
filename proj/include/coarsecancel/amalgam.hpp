#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarsecancel/group_table.hpp"
#include "coarsecancel/metric_space.hpp"

namespace ccl {

// Injective homomorphism C -> factor, validated at amalgam construction.
struct Embedding {
  std::vector<int> img;  // img[c] = index in the factor table
};

// Amalgamated product A *_C B of finite factors. Coset transversals are
// fixed at construction (first-in-enumeration representative per coset,
// with the C-coset represented by the identity), which makes every normal
// form deterministic.
class AmalgamData {
public:
  AmalgamData(GroupTable a, GroupTable b, GroupTable c, Embedding c_in_a, Embedding c_in_b,
              std::optional<std::string> gen_a = std::nullopt,
              std::optional<std::string> gen_b = std::nullopt)
      : A_(std::move(a)), B_(std::move(b)), C_(std::move(c)), cA_(std::move(c_in_a)), cB_(std::move(c_in_b)) {
    if (static_cast<int>(cA_.img.size()) != C_.size() || static_cast<int>(cB_.img.size()) != C_.size())
      throw error("amalgam: embedding size mismatch");
    if (C_.size() == A_.size() || C_.size() == B_.size())
      throw error("amalgam collapses: C has index 1 in a factor");
    build_transversal(A_, cA_, reprA_, decompA_);
    build_transversal(B_, cB_, reprB_, decompB_);
    build_left_transversal(A_, cA_, leftA_);
    build_left_transversal(B_, cB_, leftB_);
    if (gen_a) genA_ = A_.index(*gen_a);
    if (gen_b) genB_ = B_.index(*gen_b);
  }

  const GroupTable& A() const { return A_; }
  const GroupTable& B() const { return B_; }
  const GroupTable& C() const { return C_; }
  const GroupTable& factor(int f) const { return f == 0 ? A_ : B_; }
  int embed(int f, int c) const { return f == 0 ? cA_.img[static_cast<std::size_t>(c)] : cB_.img[static_cast<std::size_t>(c)]; }
  const std::vector<int>& left_transversal(int f) const { return f == 0 ? leftA_ : leftB_; }
  std::optional<int> designated_gen(int f) const { return f == 0 ? genA_ : genB_; }

  // a = c * t with t the fixed right-coset representative; c pulled back to C.
  std::pair<int, int> decompose(int f, int a) const {
    return f == 0 ? decompA_[static_cast<std::size_t>(a)] : decompB_[static_cast<std::size_t>(a)];
  }

private:
  void build_transversal(const GroupTable& fac, const Embedding& emb, std::vector<int>& repr,
                         std::vector<std::pair<int, int>>& decomp) {
    int n = fac.size();
    int m = C_.size();
    // image lookup: factor element -> C index (or -1)
    std::vector<int> pull(static_cast<std::size_t>(n), -1);
    for (int c = 0; c < m; ++c) {
      int x = emb.img[static_cast<std::size_t>(c)];
      if (x < 0 || x >= n) throw error("amalgam: embedding image out of range");
      if (pull[static_cast<std::size_t>(x)] >= 0) throw error("amalgam: embedding not injective");
      pull[static_cast<std::size_t>(x)] = c;
    }
    for (int c1 = 0; c1 < m; ++c1)
      for (int c2 = 0; c2 < m; ++c2)
        if (emb.img[static_cast<std::size_t>(C_.op(c1, c2))] !=
            fac.op(emb.img[static_cast<std::size_t>(c1)], emb.img[static_cast<std::size_t>(c2)]))
          throw error("amalgam: embedding is not a homomorphism");

    // right cosets C·a; representative = least element index, except the
    // C-coset itself which is represented by the identity
    std::vector<int> coset_of(static_cast<std::size_t>(n), -1);
    repr.clear();
    for (int a = 0; a < n; ++a) {
      if (coset_of[static_cast<std::size_t>(a)] >= 0) continue;
      int id = static_cast<int>(repr.size());
      int rep = a;
      std::vector<int> members;
      for (int c = 0; c < m; ++c) members.push_back(fac.op(emb.img[static_cast<std::size_t>(c)], a));
      bool is_c_coset = false;
      for (int x : members) {
        coset_of[static_cast<std::size_t>(x)] = id;
        rep = std::min(rep, x);
        if (x == fac.identity()) is_c_coset = true;
      }
      repr.push_back(is_c_coset ? fac.identity() : rep);
    }
    decomp.assign(static_cast<std::size_t>(n), {-1, -1});
    for (int a = 0; a < n; ++a) {
      int t = repr[static_cast<std::size_t>(coset_of[static_cast<std::size_t>(a)])];
      int c_in_fac = fac.op(a, fac.inverse(t));  // a t^-1 in C's image
      int c = pull[static_cast<std::size_t>(c_in_fac)];
      if (c < 0) throw error("amalgam: coset decomposition escaped C");
      decomp[static_cast<std::size_t>(a)] = {c, t};
    }
  }

  void build_left_transversal(const GroupTable& fac, const Embedding& emb, std::vector<int>& out) {
    int n = fac.size(), m = C_.size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    out.clear();
    for (int a = 0; a < n; ++a) {
      if (seen[static_cast<std::size_t>(a)]) continue;
      std::vector<int> members;  // left coset a·C
      bool has_id = false;
      for (int c = 0; c < m; ++c) {
        int x = fac.op(a, emb.img[static_cast<std::size_t>(c)]);
        members.push_back(x);
        if (x == fac.identity()) has_id = true;
      }
      int rep = has_id ? fac.identity() : *std::min_element(members.begin(), members.end());
      for (int x : members) seen[static_cast<std::size_t>(x)] = true;
      out.push_back(rep);
    }
  }

  GroupTable A_, B_, C_;
  Embedding cA_, cB_;
  std::vector<int> reprA_, reprB_;                       // right-coset representatives
  std::vector<std::pair<int, int>> decompA_, decompB_;   // element -> (c, t)
  std::vector<int> leftA_, leftB_;                       // left-coset representatives
  std::optional<int> genA_, genB_;
};

// Leading C-part followed by strictly alternating coset representatives.
struct AmalgamNormalForm {
  int c = 0;                                  // index in C
  std::vector<std::pair<int, int>> syllables;  // (factor 0/1, representative index)

  bool operator==(const AmalgamNormalForm& o) const {
    return c == o.c && syllables == o.syllables;
  }
  bool operator<(const AmalgamNormalForm& o) const {
    if (syllables.size() != o.syllables.size()) return syllables.size() < o.syllables.size();
    if (c != o.c) return c < o.c;
    return syllables < o.syllables;
  }
  bool is_identity(const AmalgamData& d) const {
    return syllables.empty() && c == d.C().identity();
  }
  std::string str(const AmalgamData& d) const {
    std::string s;
    if (c != d.C().identity() || syllables.empty()) s += "c:" + d.C().id_of(c);
    for (auto& [f, t] : syllables) {
      if (!s.empty()) s += ".";
      s += (f == 0 ? "A:" : "B:") + d.factor(f).id_of(t);
    }
    return s;
  }
};

// One letter of an amalgam word: an element of factor 0 (A) or 1 (B).
struct FactorLetter {
  int factor;
  int elem;
};

namespace amal {

inline AmalgamNormalForm identity_nf(const AmalgamData& d) {
  AmalgamNormalForm nf;
  nf.c = d.C().identity();
  return nf;
}

// Left multiplication by a factor letter; single cascade per letter.
inline AmalgamNormalForm left_mul(const AmalgamData& d, FactorLetter g, AmalgamNormalForm nf) {
  const GroupTable& fac = d.factor(g.factor);
  int x = fac.op(g.elem, d.embed(g.factor, nf.c));  // absorb the leading C-part
  if (!nf.syllables.empty() && nf.syllables.front().first == g.factor) {
    x = fac.op(x, nf.syllables.front().second);
    nf.syllables.erase(nf.syllables.begin());
  }
  auto [c, t] = d.decompose(g.factor, x);
  if (t != fac.identity())
    nf.syllables.insert(nf.syllables.begin(), {g.factor, t});
  nf.c = c;
  return nf;
}

inline AmalgamNormalForm normal_form(const AmalgamData& d, const std::vector<FactorLetter>& word) {
  AmalgamNormalForm nf = identity_nf(d);
  for (auto it = word.rbegin(); it != word.rend(); ++it) nf = left_mul(d, *it, nf);
  return nf;
}

inline std::vector<FactorLetter> letters_of(const AmalgamData& d, const AmalgamNormalForm& nf) {
  std::vector<FactorLetter> out;
  if (nf.c != d.C().identity()) out.push_back({0, d.embed(0, nf.c)});
  for (auto& [f, t] : nf.syllables) out.push_back({f, t});
  return out;
}

inline AmalgamNormalForm mul(const AmalgamData& d, const AmalgamNormalForm& x,
                             const AmalgamNormalForm& y) {
  auto lx = letters_of(d, x);
  AmalgamNormalForm nf = y;
  for (auto it = lx.rbegin(); it != lx.rend(); ++it) nf = left_mul(d, *it, nf);
  return nf;
}

inline AmalgamNormalForm inverse(const AmalgamData& d, const AmalgamNormalForm& x) {
  auto lx = letters_of(d, x);
  AmalgamNormalForm nf = identity_nf(d);
  for (auto& l : lx) {
    FactorLetter li{l.factor, d.factor(l.factor).inverse(l.elem)};
    nf = left_mul(d, li, nf);
  }
  return nf;
}

// Membership in a factor: no syllables (then the element is in C) or a
// single syllable of that factor.
inline bool in_factor(const AmalgamNormalForm& nf, int f) {
  if (nf.syllables.empty()) return true;
  return nf.syllables.size() == 1 && nf.syllables.front().first == f;
}

inline AmalgamNormalForm pow(const AmalgamData& d, const AmalgamNormalForm& x, int k) {
  AmalgamNormalForm acc = identity_nf(d);
  AmalgamNormalForm base = x;
  if (k < 0) {
    base = inverse(d, x);
    k = -k;
  }
  for (int i = 0; i < k; ++i) acc = mul(d, acc, base);
  return acc;
}

// Conjugates away matching end syllables until the form is cyclically
// reduced. Loxodromic on the Bass-Serre tree exactly when >= 2 syllables
// survive.
inline AmalgamNormalForm cyclic_reduction(const AmalgamData& d, AmalgamNormalForm w) {
  for (;;) {
    if (w.syllables.size() < 2) return w;
    if (w.syllables.front().first != w.syllables.back().first) return w;
    // head = c-part together with the first syllable; w -> head^-1 w head
    AmalgamNormalForm head;
    head.c = w.c;
    head.syllables = {w.syllables.front()};
    AmalgamNormalForm conj = mul(d, inverse(d, head), mul(d, w, head));
    if (conj.syllables.size() < w.syllables.size())
      w = conj;
    else
      return w;
  }
}

inline int syllable_length(const AmalgamNormalForm& nf) {
  return static_cast<int>(nf.syllables.size());
}

}  // namespace amal

}  // namespace ccl
