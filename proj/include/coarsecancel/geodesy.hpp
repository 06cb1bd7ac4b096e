#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coarsecancel/metric_space.hpp"

namespace ccl {

// Non-empty subset of a space, kept as sorted point indices.
struct SubsetHandle {
  std::vector<int> members;

  static SubsetHandle of(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.empty()) throw error("SubsetHandle: empty subset");
    return SubsetHandle{std::move(idx)};
  }
  static SubsetHandle from_ids(const FiniteMetricSpace& X, const std::vector<std::string>& ids) {
    std::vector<int> idx;
    idx.reserve(ids.size());
    for (auto& s : ids) idx.push_back(X.index(s));
    return of(std::move(idx));
  }
  bool contains(int i) const {
    return std::binary_search(members.begin(), members.end(), i);
  }
  std::size_t size() const { return members.size(); }
};

inline double dist_to_subset(const FiniteMetricSpace& X, int x, const SubsetHandle& Y) {
  double best = std::numeric_limits<double>::infinity();
  for (int y : Y.members) best = std::min(best, X.d(x, y));
  return best;
}

inline double subset_diameter(const FiniteMetricSpace& X, const SubsetHandle& Y) {
  double m = 0;
  for (int a : Y.members)
    for (int b : Y.members) m = std::max(m, X.d(a, b));
  return m;
}

// Path through the space parametrized by arclength.
struct DiscretePath {
  std::vector<int> points;
  std::vector<double> params;  // non-decreasing, gaps >= pairwise distance

  static DiscretePath from_points(const FiniteMetricSpace& X, std::vector<int> pts) {
    if (pts.empty()) throw error("DiscretePath: empty");
    std::vector<double> par(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
      par[i] = par[i - 1] + X.d(pts[i - 1], pts[i]);
    return DiscretePath{std::move(pts), std::move(par)};
  }
  static DiscretePath from_ids(const FiniteMetricSpace& X, const std::vector<std::string>& ids) {
    std::vector<int> pts;
    for (auto& s : ids) pts.push_back(X.index(s));
    return from_points(X, std::move(pts));
  }

  void validate(const FiniteMetricSpace& X) const {
    if (points.empty() || points.size() != params.size())
      throw error("DiscretePath: size mismatch");
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (params[i] < params[i - 1] - kDefaultTol) throw error("DiscretePath: params decrease");
      if (params[i] - params[i - 1] < X.d(points[i - 1], points[i]) - kDefaultTol)
        throw error("DiscretePath: parameter gap shorter than distance");
    }
  }
};

struct QuasiParams {
  double k = 1.0;              // minimal k for l = 0; +inf when none exists
  double l = 0.0;              // minimal l for k = 1
  std::optional<double> local_scale;
};

// Measures how far a path is from being geodesic: the least additive defect
// at k = 1 and the least multiplicative one at l = 0.
inline QuasiParams path_quality(const FiniteMetricSpace& X, const DiscretePath& p) {
  p.validate(X);
  QuasiParams q;
  std::size_t m = p.points.size();
  if (m <= 1) return q;
  double l = 0.0, k = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double dt = p.params[j] - p.params[i];
      double dx = X.d(p.points[i], p.points[j]);
      l = std::max(l, dt - dx);
      if (dx > kDefaultTol)
        k = std::max(k, dt / dx);
      else if (dt > kDefaultTol)
        k = std::numeric_limits<double>::infinity();
    }
  }
  q.l = std::max(0.0, l);
  q.k = k;
  return q;
}

// True iff every parameter window of diameter <= L satisfies the (k,l)
// inequality. Arclength parametrization makes the lower bound automatic,
// so only |t - t'| <= k d + l is tested.
inline bool is_local_quasi_geodesic(const FiniteMetricSpace& X, const DiscretePath& p, double L,
                                    double k, double l, double tol = kDefaultTol) {
  if (!(L > 0)) throw error("is_local_quasi_geodesic: L must be positive");
  p.validate(X);
  std::size_t m = p.points.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double dt = p.params[j] - p.params[i];
      if (dt > L + tol) break;
      if (dt > k * X.d(p.points[i], p.points[j]) + l + tol) return false;
    }
  return true;
}

// Least alpha with d(x,Y) <= (y|y')_x + alpha over all x in X, y,y' in Y.
inline double quasi_convexity_constant(const FiniteMetricSpace& X, const SubsetHandle& Y) {
  double alpha = 0.0;
  for (int x = 0; x < X.size(); ++x) {
    double dxY = dist_to_subset(X, x, Y);
    for (int y : Y.members)
      for (int yp : Y.members) alpha = std::max(alpha, dxY - X.gromov(y, yp, x));
  }
  return alpha;
}

inline SubsetHandle neighborhood(const FiniteMetricSpace& X, const SubsetHandle& Y, double A,
                                 double tol = kDefaultTol) {
  if (A < 0) throw error("neighborhood: negative radius");
  std::vector<int> out;
  for (int x = 0; x < X.size(); ++x)
    if (dist_to_subset(X, x, Y) <= A + tol) out.push_back(x);
  return SubsetHandle::of(std::move(out));
}

inline SubsetHandle ball(const FiniteMetricSpace& X, int center, double r,
                         double tol = kDefaultTol) {
  std::vector<int> out;
  for (int x = 0; x < X.size(); ++x)
    if (X.d(center, x) <= r + tol) out.push_back(x);
  return SubsetHandle::of(std::move(out));
}

// Discrete hull: all points lying on some (1,delta)-quasi-geodesic between
// two members, realized by the additive-defect predicate
// d(y,z) + d(z,y') <= d(y,y') + delta.
inline SubsetHandle hull(const FiniteMetricSpace& X, const SubsetHandle& Y, double delta,
                         double tol = kDefaultTol) {
  if (delta < 0) throw error("hull: negative delta");
  std::vector<int> out;
  for (int z = 0; z < X.size(); ++z) {
    bool in = false;
    for (std::size_t a = 0; a < Y.members.size() && !in; ++a)
      for (std::size_t b = a; b < Y.members.size() && !in; ++b) {
        int y = Y.members[a], yp = Y.members[b];
        if (X.d(y, z) + X.d(z, yp) <= X.d(y, yp) + delta + tol) in = true;
      }
    if (in) out.push_back(z);
  }
  return SubsetHandle::of(std::move(out));
}

struct IntersectionDiameter {
  double diameter = 0.0;
  bool empty = false;
  std::vector<int> members;
};

// diam( Y_1^{+A} ∩ ... ∩ Y_m^{+A} ); empty intersections report 0 with a flag
// so the sup/diam formulas downstream stay total.
inline IntersectionDiameter intersection_diameter(const FiniteMetricSpace& X,
                                                  const std::vector<SubsetHandle>& subsets,
                                                  double A, double tol = kDefaultTol) {
  if (A < 0) throw error("intersection_diameter: negative thickening");
  IntersectionDiameter out;
  if (subsets.empty()) throw error("intersection_diameter: no subsets");
  for (int x = 0; x < X.size(); ++x) {
    bool in = true;
    for (auto& Y : subsets)
      if (dist_to_subset(X, x, Y) > A + tol) {
        in = false;
        break;
      }
    if (in) out.members.push_back(x);
  }
  if (out.members.empty()) {
    out.empty = true;
    return out;
  }
  for (std::size_t a = 0; a < out.members.size(); ++a)
    for (std::size_t b = a + 1; b < out.members.size(); ++b)
      out.diameter = std::max(out.diameter, X.d(out.members[a], out.members[b]));
  return out;
}

struct StrongQuasiConvexity {
  bool strongly_quasi_convex = false;
  bool induced_connected = true;
  double alpha = 0.0;  // quasi-convexity constant of Y
  double gap = 0.0;    // max over pairs of d_Y - d_X (inf when disconnected)
};

// Induced length metric on Y: shortest paths through edges with both ends in Y.
inline std::vector<double> induced_length_metric(const FiniteMetricSpace& X,
                                                 const SubsetHandle& Y) {
  int m = static_cast<int>(Y.members.size());
  std::vector<int> local(static_cast<std::size_t>(X.size()), -1);
  for (int i = 0; i < m; ++i) local[static_cast<std::size_t>(Y.members[static_cast<std::size_t>(i)])] = i;
  std::vector<std::tuple<int, int, double>> sub;
  for (auto& [u, v, w] : X.edges()) {
    int lu = local[static_cast<std::size_t>(u)], lv = local[static_cast<std::size_t>(v)];
    if (lu >= 0 && lv >= 0) sub.push_back({lu, lv, w});
  }
  auto adj = detail::adjacency(m, sub);
  std::vector<double> out(static_cast<std::size_t>(m) * m, 0.0);
  for (int s = 0; s < m; ++s) {
    auto row = detail::dijkstra(m, adj, s);
    for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(s) * m + j] = row[static_cast<std::size_t>(j)];
  }
  return out;
}

// Y is strongly quasi-convex when it is 2 delta-quasi-convex and its induced
// length metric stays within 8 delta of the ambient one.
inline StrongQuasiConvexity strong_quasi_convexity_check(const FiniteMetricSpace& X,
                                                         const SubsetHandle& Y, double delta,
                                                         double tol = kDefaultTol) {
  StrongQuasiConvexity out;
  auto dY = induced_length_metric(X, Y);
  int m = static_cast<int>(Y.members.size());
  for (int a = 0; a < m && out.induced_connected; ++a)
    for (int b = 0; b < m; ++b)
      if (std::isinf(dY[static_cast<std::size_t>(a) * m + b])) {
        out.induced_connected = false;
        out.gap = std::numeric_limits<double>::infinity();
        break;
      }
  if (!out.induced_connected) return out;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      out.gap = std::max(out.gap, dY[static_cast<std::size_t>(a) * m + b] -
                                      X.d(Y.members[static_cast<std::size_t>(a)], Y.members[static_cast<std::size_t>(b)]));
  out.alpha = quasi_convexity_constant(X, Y);
  out.strongly_quasi_convex = out.gap <= 8 * delta + tol && out.alpha <= 2 * delta + tol;
  return out;
}

}  // namespace ccl
