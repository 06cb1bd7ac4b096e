#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarsecancel/common.hpp"
#include "coarsecancel/parallel.hpp"

namespace ccl {

struct GraphSpec {
  std::vector<std::string> vertices;
  // (u, v, length), length > 0, u != v
  std::vector<std::tuple<std::string, std::string, double>> edges;
};

// Finite point set carrying the full shortest-path metric of a weighted
// graph. The originating edges are kept so that induced length metrics
// (subsets, cone bases) can be recomputed later.
class FiniteMetricSpace {
public:
  FiniteMetricSpace() = default;

  FiniteMetricSpace(std::vector<std::string> ids, std::vector<double> matrix,
                    std::vector<std::tuple<int, int, double>> edges = {})
      : points_(std::move(ids)), dist_(std::move(matrix)), edges_(std::move(edges)) {
    n_ = static_cast<int>(points_.size());
    if (dist_.size() != static_cast<std::size_t>(n_) * n_)
      throw error("FiniteMetricSpace: matrix size mismatch");
    for (int i = 0; i < n_; ++i) index_[points_[i]] = i;
    if (index_.size() != points_.size()) throw error("FiniteMetricSpace: duplicate point ids");
    validate_metric();
  }

  int size() const { return n_; }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& id(int i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<std::tuple<int, int, double>>& edges() const { return edges_; }

  int index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw error("unknown point id: " + id);
    return it->second;
  }
  bool has(const std::string& id) const { return index_.count(id) != 0; }

  double d(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }

  double diameter() const {
    double m = 0;
    for (double v : dist_) m = std::max(m, v);
    return m;
  }

  // (x|y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2
  double gromov(int x, int y, int z) const {
    return 0.5 * (d(x, z) + d(y, z) - d(x, y));
  }

private:
  void validate_metric() const {
    for (int i = 0; i < n_; ++i) {
      if (std::fabs(d(i, i)) > kDefaultTol) throw error("metric: nonzero diagonal");
      for (int j = 0; j < n_; ++j) {
        if (d(i, j) < -kDefaultTol) throw error("metric: negative distance");
        if (std::fabs(d(i, j) - d(j, i)) > kDefaultTol) throw error("metric: asymmetric");
      }
    }
    auto check = [&](int i, int j, int k) {
      if (d(i, j) > d(i, k) + d(k, j) + kDefaultTol)
        throw error("metric: triangle inequality fails at (" + points_[i] + "," +
                    points_[j] + "," + points_[k] + ")");
    };
    if (static_cast<std::int64_t>(n_) * n_ * n_ <= 100'000'000) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k) check(i, j, k);
    } else {  // spot-check on large spaces; exactness comes from the APSP construction
      std::mt19937_64 rng(0);
      std::uniform_int_distribution<int> pick(0, n_ - 1);
      for (int t = 0; t < 1'000'000; ++t) check(pick(rng), pick(rng), pick(rng));
    }
  }

  int n_ = 0;
  std::vector<std::string> points_;
  std::vector<double> dist_;
  std::vector<std::tuple<int, int, double>> edges_;
  std::unordered_map<std::string, int> index_;
};

namespace detail {

inline std::vector<std::vector<std::pair<int, double>>> adjacency(
    int n, const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (auto& [u, v, w] : edges) {
    adj[static_cast<std::size_t>(u)].push_back({v, w});
    adj[static_cast<std::size_t>(v)].push_back({u, w});
  }
  return adj;
}

inline std::vector<double> dijkstra(int n,
                                    const std::vector<std::vector<std::pair<int, double>>>& adj,
                                    int src) {
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> q;
  dist[static_cast<std::size_t>(src)] = 0;
  q.push({0.0, src});
  while (!q.empty()) {
    auto [du, u] = q.top();
    q.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
      double nd = du + w;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        q.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace detail

// Replaces every edge by K unit-fraction segments; refines the vertex
// resolution at which the continuous statements are tested.
inline GraphSpec subdivide(const GraphSpec& spec, int k) {
  if (k <= 1) return spec;
  GraphSpec out;
  out.vertices = spec.vertices;
  for (auto& [u, v, w] : spec.edges) {
    std::string a = u, b = v;
    bool flipped = b < a;
    if (flipped) std::swap(a, b);
    std::string prev = flipped ? v : u;
    std::string last = flipped ? u : v;
    // synthetic ids a~b~i sit between a and b
    std::vector<std::string> mids;
    for (int i = 1; i < k; ++i) mids.push_back(a + "~" + b + "~" + std::to_string(i));
    for (auto& m : mids) out.vertices.push_back(m);
    std::string cur = a;
    for (int i = 1; i < k; ++i) {
      out.edges.push_back({cur, mids[static_cast<std::size_t>(i - 1)], w / k});
      cur = mids[static_cast<std::size_t>(i - 1)];
    }
    out.edges.push_back({cur, b, w / k});
  }
  return out;
}

inline FiniteMetricSpace build_space(const GraphSpec& spec) {
  int n = static_cast<int>(spec.vertices.size());
  if (n == 0) throw error("build_space: empty vertex set");
  std::unordered_map<std::string, int> idx;
  for (int i = 0; i < n; ++i) {
    if (!idx.emplace(spec.vertices[static_cast<std::size_t>(i)], i).second)
      throw error("build_space: duplicate vertex id " + spec.vertices[static_cast<std::size_t>(i)]);
  }
  std::vector<std::tuple<int, int, double>> edges;
  for (auto& [u, v, w] : spec.edges) {
    auto iu = idx.find(u), iv = idx.find(v);
    if (iu == idx.end() || iv == idx.end())
      throw error("build_space: edge endpoint not in vertex list: " + u + "-" + v);
    if (iu->second == iv->second) throw error("build_space: self-loop at " + u);
    if (!(w > 0)) throw error("build_space: non-positive edge length on " + u + "-" + v);
    edges.push_back({iu->second, iv->second, w});
  }
  auto adj = detail::adjacency(n, edges);

  // connectivity first, so a disconnected input is rejected by naming its components
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = ncomp;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
        (void)w;
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }
  if (ncomp > 1) {
    std::string msg = "build_space: graph disconnected; components:";
    for (int c = 0; c < ncomp; ++c) {
      msg += " {";
      bool first = true;
      for (int i = 0; i < n; ++i)
        if (comp[static_cast<std::size_t>(i)] == c) {
          if (!first) msg += ",";
          msg += spec.vertices[static_cast<std::size_t>(i)];
          first = false;
        }
      msg += "}";
    }
    throw error(msg);
  }

  std::vector<double> mat(static_cast<std::size_t>(n) * n, 0.0);
  for (int s = 0; s < n; ++s) {
    auto row = detail::dijkstra(n, adj, s);
    for (int j = 0; j < n; ++j) mat[static_cast<std::size_t>(s) * n + j] = row[static_cast<std::size_t>(j)];
  }
  return FiniteMetricSpace(spec.vertices, std::move(mat), std::move(edges));
}

struct HyperbolicityReport {
  double delta = 0.0;
  // ordered so that d(x,z) + d(y,t) is the largest pairing: replacing delta
  // by anything smaller violates the four-point condition on this quadruple
  std::array<std::string, 4> witness{};
  bool has_witness = false;
};

// Exhaustive four-point constant: the least delta such that
// d(x,z)+d(y,t) <= max{d(x,y)+d(z,t), d(x,t)+d(y,z)} + 2 delta
// over all quadruples. Unordered quadruples suffice: the three pairings
// are scanned and the defect is (largest - middle)/2.
inline HyperbolicityReport hyperbolicity_delta(const FiniteMetricSpace& X, int threads = 0) {
  int n = X.size();
  if (n < 1) throw error("hyperbolicity_delta: empty space");
  HyperbolicityReport rep;
  if (n < 4) {
    rep.delta = 0.0;
    return rep;
  }

  struct Best {
    double delta = -1.0;
    std::array<int, 4> w{-1, -1, -1, -1};
  };
  auto better = [](const Best& a, const Best& b) {
    if (b.delta > a.delta + 1e-15) return b;
    if (a.delta > b.delta + 1e-15) return a;
    return b.w < a.w ? b : a;  // deterministic tie-break
  };

  // linear index over i<j<k<l via i-major chunks
  std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) * (n - 2) * (n - 3) / 24;
  auto unrank = [n](std::int64_t r, int& i, int& j, int& k, int& l) {
    // smallest i with C(n-1-i,3) cumulative > r
    std::int64_t acc = 0;
    for (i = 0;; ++i) {
      std::int64_t m = n - 1 - i;
      std::int64_t block = m * (m - 1) * (m - 2) / 6;
      if (acc + block > r) break;
      acc += block;
    }
    std::int64_t r2 = r - acc;
    for (j = i + 1;; ++j) {
      std::int64_t m = n - 1 - j;
      std::int64_t block = m * (m - 1) / 2;
      if (r2 < block) break;
      r2 -= block;
    }
    for (k = j + 1;; ++k) {
      std::int64_t m = n - 1 - k;
      if (r2 < m) break;
      r2 -= m;
    }
    l = k + 1 + static_cast<int>(r2);
  };

  Best out = parallel_chunk_reduce<Best>(
      total, Best{},
      [&](std::int64_t lo, std::int64_t hi, Best init) {
        Best best = init;
        int i, j, k, l;
        unrank(lo, i, j, k, l);
        for (std::int64_t r = lo; r < hi; ++r) {
          double s_a = X.d(i, j) + X.d(k, l);
          double s_b = X.d(i, k) + X.d(j, l);
          double s_c = X.d(i, l) + X.d(j, k);
          double m1 = std::max({s_a, s_b, s_c});
          double m3 = std::min({s_a, s_b, s_c});
          double m2 = s_a + s_b + s_c - m1 - m3;
          double defect = 0.5 * (m1 - m2);
          if (defect > best.delta + 1e-15 ||
              (defect > best.delta - 1e-15 && best.w[0] < 0)) {
            std::array<int, 4> w;
            if (m1 == s_b)
              w = {i, j, k, l};
            else if (m1 == s_a)
              w = {i, k, j, l};
            else
              w = {i, j, l, k};
            Best cand{defect, w};
            best = better(best, cand);
          }
          // advance (i,j,k,l)
          if (++l >= n) {
            if (++k >= n - 1) {
              if (++j >= n - 2) {
                ++i;
                j = i + 1;
              }
              k = j + 1;
            }
            l = k + 1;
          }
        }
        return best;
      },
      [&](Best a, Best b) { return better(a, b); }, threads);

  rep.delta = std::max(0.0, out.delta);
  if (out.w[0] >= 0) {
    for (int t = 0; t < 4; ++t) rep.witness[static_cast<std::size_t>(t)] = X.id(out.w[static_cast<std::size_t>(t)]);
    rep.has_witness = true;
  }
  return rep;
}

// Companion form of the four-point condition:
// (x|z)_t >= min{(x|y)_t, (y|z)_t} - delta over every ordered quadruple.
// Returns the worst defect (<= tol when delta works).
inline double four_point_condition1_defect(const FiniteMetricSpace& X, double delta,
                                           int threads = 0) {
  int n = X.size();
  std::int64_t total = static_cast<std::int64_t>(n) * n * n * n;
  double worst = parallel_chunk_reduce<double>(
      total, -std::numeric_limits<double>::infinity(),
      [&](std::int64_t lo, std::int64_t hi, double init) {
        double w = init;
        for (std::int64_t r = lo; r < hi; ++r) {
          int t = static_cast<int>(r % n);
          std::int64_t q = r / n;
          int z = static_cast<int>(q % n);
          q /= n;
          int y = static_cast<int>(q % n);
          int x = static_cast<int>(q / n);
          double lhs = X.gromov(x, z, t);
          double rhs = std::min(X.gromov(x, y, t), X.gromov(y, z, t)) - delta;
          w = std::max(w, rhs - lhs);
        }
        return w;
      },
      [](double a, double b) { return std::max(a, b); }, threads);
  return worst;
}

struct FivePointViolation {
  int inequality;  // 1..3
  std::array<std::string, 5> tuple;
  double margin;  // lhs - rhs, positive means violated
};

struct FivePointReport {
  std::int64_t tuples_checked = 0;
  std::array<std::int64_t, 3> violations{0, 0, 0};
  std::vector<FivePointViolation> witnesses;  // first few
  bool sampled = false;
  bool ok() const { return violations[0] + violations[1] + violations[2] == 0; }
};

// Checks the three five-point metric inequalities that substitute for thin
// triangles in non-geodesic spaces. Exhaustive when n^5 fits the budget,
// otherwise seeded sampling.
inline FivePointReport verify_metric_inequalities(const FiniteMetricSpace& X, double delta,
                                                  std::int64_t sample_budget = 2'000'000,
                                                  std::uint64_t seed = 0,
                                                  double tol = kDefaultTol) {
  FivePointReport rep;
  int n = X.size();
  auto check_tuple = [&](int x, int y, int z, int s, int t) {
    ++rep.tuples_checked;
    auto record = [&](int which, double margin) {
      ++rep.violations[static_cast<std::size_t>(which - 1)];
      if (rep.witnesses.size() < 8)
        rep.witnesses.push_back({which,
                                 {X.id(x), X.id(y), X.id(z), X.id(s), X.id(t)},
                                 margin});
    };
    // (1) (x|y)_t <= max{d(x,t) - (y|z)_x, (x|z)_t} + delta
    {
      double lhs = X.gromov(x, y, t);
      double rhs = std::max(X.d(x, t) - X.gromov(y, z, x), X.gromov(x, z, t)) + delta;
      if (lhs > rhs + tol) record(1, lhs - rhs);
    }
    // (2) d(s,t) <= |d(x,s)-d(x,t)| + 2 max{(x|y)_s, (x|y)_t} + 2 delta
    {
      double lhs = X.d(s, t);
      double rhs = std::fabs(X.d(x, s) - X.d(x, t)) +
                   2 * std::max(X.gromov(x, y, s), X.gromov(x, y, t)) + 2 * delta;
      if (lhs > rhs + tol) record(2, lhs - rhs);
    }
    // (3) d(s,t) <= max{|d(x,s)-d(x,t)| + 2 max{(x|y)_s, (x|z)_t},
    //                   d(x,s)+d(x,t) - 2 (y|z)_x} + 4 delta
    {
      double lhs = X.d(s, t);
      double rhs = std::max(std::fabs(X.d(x, s) - X.d(x, t)) +
                                2 * std::max(X.gromov(x, y, s), X.gromov(x, z, t)),
                            X.d(x, s) + X.d(x, t) - 2 * X.gromov(y, z, x)) +
                   4 * delta;
      if (lhs > rhs + tol) record(3, lhs - rhs);
    }
  };

  double total = std::pow(static_cast<double>(n), 5);
  if (total <= static_cast<double>(sample_budget)) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) check_tuple(x, y, z, s, t);
  } else {
    rep.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (std::int64_t it = 0; it < sample_budget; ++it)
      check_tuple(pick(rng), pick(rng), pick(rng), pick(rng), pick(rng));
  }
  return rep;
}

}  // namespace ccl
