#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coarsecancel/common.hpp"

namespace ccl {

// Finite group as an explicit multiplication table. Identity, inverses and
// associativity are verified exhaustively at construction.
class GroupTable {
public:
  GroupTable() = default;

  static GroupTable from_table(std::vector<std::string> ids, std::vector<std::vector<int>> rows) {
    GroupTable g;
    g.elems_ = std::move(ids);
    int n = static_cast<int>(g.elems_.size());
    if (n == 0) throw error("GroupTable: empty");
    g.mult_.assign(static_cast<std::size_t>(n) * n, -1);
    if (static_cast<int>(rows.size()) != n) throw error("GroupTable: row count mismatch");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
        throw error("GroupTable: row length mismatch");
      for (int j = 0; j < n; ++j) {
        int v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v < 0 || v >= n) throw error("GroupTable: entry out of range");
        g.mult_[static_cast<std::size_t>(i) * n + j] = v;
      }
    }
    g.finish();
    return g;
  }

  static GroupTable cyclic(int n, const std::string& gen_name = "a") {
    if (n < 1) throw error("cyclic: order must be >= 1");
    std::vector<std::string> ids;
    ids.push_back("e");
    for (int i = 1; i < n; ++i)
      ids.push_back(i == 1 ? gen_name : gen_name + std::to_string(i));
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % n;
    return from_table(std::move(ids), std::move(rows));
  }

  static GroupTable trivial() { return cyclic(1); }

  // Symmetric group on {0,..,k-1} listed in lexicographic permutation order.
  static GroupTable symmetric(int k) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    int n = static_cast<int>(perms.size());
    std::map<std::vector<int>, int> idx;
    for (int i = 0; i < n; ++i) idx[perms[static_cast<std::size_t>(i)]] = i;
    std::vector<std::string> ids;
    for (auto& q : perms) {
      std::string s = "p";
      for (int v : q) s += std::to_string(v);
      ids.push_back(s);
    }
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<int> comp(static_cast<std::size_t>(k));
        for (int x = 0; x < k; ++x)
          comp[static_cast<std::size_t>(x)] = perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)])];
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = idx.at(comp);
      }
    return from_table(std::move(ids), std::move(rows));
  }

  int size() const { return static_cast<int>(elems_.size()); }
  const std::vector<std::string>& elements() const { return elems_; }
  const std::string& id_of(int i) const { return elems_[static_cast<std::size_t>(i)]; }
  int identity() const { return identity_; }
  int op(int a, int b) const { return mult_[static_cast<std::size_t>(a) * size() + b]; }
  int inverse(int a) const { return inv_[static_cast<std::size_t>(a)]; }
  int index(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
      if (elems_[static_cast<std::size_t>(i)] == id) return i;
    throw error("GroupTable: unknown element " + id);
  }

  int order_of(int a) const {
    int x = a, k = 1;
    while (x != identity_) {
      x = op(x, a);
      ++k;
      if (k > size()) throw error("GroupTable: order overflow (corrupt table)");
    }
    return k;
  }

  bool has_involution() const {
    for (int a = 0; a < size(); ++a)
      if (a != identity_ && op(a, a) == identity_) return true;
    return false;
  }

  int conjugate(int g, int h) const { return op(op(g, h), inverse(g)); }  // g h g^-1

private:
  void finish() {
    int n = size();
    identity_ = -1;
    for (int e = 0; e < n; ++e) {
      bool ok = true;
      for (int a = 0; a < n; ++a)
        if (op(e, a) != a || op(a, e) != a) {
          ok = false;
          break;
        }
      if (ok) {
        identity_ = e;
        break;
      }
    }
    if (identity_ < 0) throw error("GroupTable: no identity element");
    inv_.assign(static_cast<std::size_t>(n), -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b)
        if (op(a, b) == identity_ && op(b, a) == identity_) {
          inv_[static_cast<std::size_t>(a)] = b;
          break;
        }
      if (inv_[static_cast<std::size_t>(a)] < 0) throw error("GroupTable: element without inverse: " + elems_[static_cast<std::size_t>(a)]);
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (op(op(a, b), c) != op(a, op(b, c))) throw error("GroupTable: not associative");
  }

  std::vector<std::string> elems_;
  std::vector<int> mult_;
  std::vector<int> inv_;
  int identity_ = -1;
};

inline std::int64_t group_exponent(const GroupTable& g) {
  std::int64_t e = 1;
  for (int a = 0; a < g.size(); ++a) e = lcm64(e, g.order_of(a));
  return e;
}

namespace detail {

// Expresses every element as parent * generator so a partial map on the
// generators extends deterministically.
struct GenClosure {
  std::vector<int> gens;
  std::vector<int> parent;  // -1 for identity
  std::vector<int> via;     // generator index used
  std::vector<int> order;   // discovery order
};

inline GenClosure generating_closure(const GroupTable& g) {
  GenClosure c;
  int n = g.size();
  c.parent.assign(static_cast<std::size_t>(n), -2);
  c.via.assign(static_cast<std::size_t>(n), -1);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  auto close = [&]() {
    c.order.clear();
    std::fill(seen.begin(), seen.end(), false);
    std::fill(c.parent.begin(), c.parent.end(), -2);
    seen[static_cast<std::size_t>(g.identity())] = true;
    c.parent[static_cast<std::size_t>(g.identity())] = -1;
    c.order.push_back(g.identity());
    for (std::size_t head = 0; head < c.order.size(); ++head) {
      int x = c.order[head];
      for (std::size_t gi = 0; gi < c.gens.size(); ++gi) {
        int y = g.op(x, c.gens[gi]);
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = true;
          c.parent[static_cast<std::size_t>(y)] = x;
          c.via[static_cast<std::size_t>(y)] = static_cast<int>(gi);
          c.order.push_back(y);
        }
      }
    }
  };
  close();
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(c.order.size()) == n) break;
    if (!seen[static_cast<std::size_t>(a)]) {
      c.gens.push_back(a);
      close();
    }
  }
  return c;
}

}  // namespace detail

struct AutomorphismGroup {
  GroupTable table;                     // abstract group of automorphisms
  std::vector<std::vector<int>> perms;  // perms[i][x] = image of x under automorphism i
};

// Brute-force automorphism search: assign generator images among elements of
// equal order, extend through the generating closure, verify, collect.
inline AutomorphismGroup automorphism_group(const GroupTable& g, int cap = 64) {
  int n = g.size();
  if (n > cap) throw error("automorphism_group: order " + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
  auto clo = detail::generating_closure(g);
  int k = static_cast<int>(clo.gens.size());
  std::vector<int> orders(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) orders[static_cast<std::size_t>(a)] = g.order_of(a);

  std::vector<std::vector<int>> found;
  std::vector<int> img_gen(static_cast<std::size_t>(std::max(k, 1)), -1);
  std::vector<int> img(static_cast<std::size_t>(n), -1);

  auto extend_and_check = [&]() -> bool {
    std::fill(img.begin(), img.end(), -1);
    img[static_cast<std::size_t>(g.identity())] = g.identity();
    for (int x : clo.order) {
      if (x == g.identity()) continue;
      int p = clo.parent[static_cast<std::size_t>(x)];
      int gi = clo.via[static_cast<std::size_t>(x)];
      img[static_cast<std::size_t>(x)] = g.op(img[static_cast<std::size_t>(p)], img_gen[static_cast<std::size_t>(gi)]);
    }
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int x = 0; x < n; ++x) {
      if (hit[static_cast<std::size_t>(img[static_cast<std::size_t>(x)])]) return false;
      hit[static_cast<std::size_t>(img[static_cast<std::size_t>(x)])] = true;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (img[static_cast<std::size_t>(g.op(a, b))] !=
            g.op(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)]))
          return false;
    return true;
  };

  auto rec = [&](auto&& self, int gi) -> void {
    if (gi == k) {
      if (k == 0) {
        // trivial group
        found.push_back({g.identity()});
        return;
      }
      if (extend_and_check()) found.push_back(img);
      return;
    }
    int target = clo.gens[static_cast<std::size_t>(gi)];
    for (int c = 0; c < n; ++c) {
      if (orders[static_cast<std::size_t>(c)] != orders[static_cast<std::size_t>(target)]) continue;
      img_gen[static_cast<std::size_t>(gi)] = c;
      self(self, gi + 1);
    }
  };
  rec(rec, 0);

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  AutomorphismGroup out;
  out.perms = found;
  int m = static_cast<int>(found.size());
  std::map<std::vector<int>, int> idx;
  for (int i = 0; i < m; ++i) idx[found[static_cast<std::size_t>(i)]] = i;
  std::vector<std::string> ids;
  for (int i = 0; i < m; ++i) ids.push_back("phi" + std::to_string(i));
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<int> comp(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x)
        comp[static_cast<std::size_t>(x)] =
            found[static_cast<std::size_t>(i)][static_cast<std::size_t>(found[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)])];
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = idx.at(comp);
    }
  out.table = GroupTable::from_table(std::move(ids), std::move(rows));
  return out;
}

// Hol F = F x| Aut F realized as permutations of F: (f, phi) sends x to
// f * phi(x). The permutation determines the pair, so composition of
// permutations is the group law.
inline GroupTable holomorph(const GroupTable& f, int cap = 64) {
  auto aut = automorphism_group(f, cap);
  int n = f.size();
  int m = static_cast<int>(aut.perms.size());
  std::vector<std::vector<int>> perms;
  std::vector<std::string> ids;
  perms.reserve(static_cast<std::size_t>(n) * m);
  for (int fi = 0; fi < n; ++fi)
    for (int ai = 0; ai < m; ++ai) {
      std::vector<int> p(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x)
        p[static_cast<std::size_t>(x)] = f.op(fi, aut.perms[static_cast<std::size_t>(ai)][static_cast<std::size_t>(x)]);
      perms.push_back(std::move(p));
      ids.push_back("h_" + f.id_of(fi) + "_phi" + std::to_string(ai));
    }
  int total = static_cast<int>(perms.size());
  std::map<std::vector<int>, int> idx;
  for (int i = 0; i < total; ++i) {
    if (!idx.emplace(perms[static_cast<std::size_t>(i)], i).second)
      throw error("holomorph: permutation collision");
  }
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(total), std::vector<int>(static_cast<std::size_t>(total)));
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) {
      std::vector<int> comp(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x)
        comp[static_cast<std::size_t>(x)] =
            perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)])];
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = idx.at(comp);
    }
  return GroupTable::from_table(std::move(ids), std::move(rows));
}

// Exhaustive check that gHg^-1 ∩ H = {1} for every g outside H.
inline bool malnormality_check(const GroupTable& g, const std::vector<int>& h_elems) {
  std::vector<bool> in_h(static_cast<std::size_t>(g.size()), false);
  for (int h : h_elems) {
    if (h < 0 || h >= g.size()) throw error("malnormality_check: element out of range");
    in_h[static_cast<std::size_t>(h)] = true;
  }
  if (!in_h[static_cast<std::size_t>(g.identity())]) throw error("malnormality_check: H misses identity");
  for (int a : h_elems)
    for (int b : h_elems)
      if (!in_h[static_cast<std::size_t>(g.op(a, b))]) throw error("malnormality_check: H not a subgroup");
  for (int a : h_elems)
    if (!in_h[static_cast<std::size_t>(g.inverse(a))]) throw error("malnormality_check: H not inverse-closed");

  for (int x = 0; x < g.size(); ++x) {
    if (in_h[static_cast<std::size_t>(x)]) continue;
    for (int h : h_elems) {
      if (h == g.identity()) continue;
      if (in_h[static_cast<std::size_t>(g.conjugate(x, h))]) return false;
    }
  }
  return true;
}

}  // namespace ccl
