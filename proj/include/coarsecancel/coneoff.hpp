#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coarsecancel/geodesy.hpp"
#include "coarsecancel/metric_space.hpp"

namespace ccl {

// cosh mu(t) = cosh^2 rho - sinh^2 rho cos(min{pi, t / sinh rho}),
// evaluated through the stable form cosh mu = 1 + 2 sinh^2 rho sin^2(theta/2)
// so that mu(0) = 0 exactly.
inline double mu(double t, double rho) {
  if (t < 0) throw error("mu: t must be >= 0");
  if (!(rho > 0)) throw error("mu: rho must be positive");
  double theta = std::min(M_PI, t / std::sinh(rho));
  double s = std::sinh(rho) * std::sin(theta / 2);
  return std::acosh(1.0 + 2.0 * s * s);
}

struct ConePoint {
  int base = -1;   // index into the cone's base list; -1 = apex
  double r = 0.0;  // radial coordinate, 0 at the apex

  bool is_apex() const { return base < 0; }
};

// Distance in the cone of radius rho over a base with metric d_Y.
inline double cone_distance(const ConePoint& p, const ConePoint& q, double rho, double dY) {
  if (!(rho > 0)) throw error("cone_distance: rho must be positive");
  if (p.is_apex() && q.is_apex()) return 0.0;
  if (p.is_apex()) return q.r;
  if (q.is_apex()) return p.r;
  double theta = std::min(M_PI, dY / std::sinh(rho));
  double s = std::sin(theta / 2);
  double c = std::cosh(p.r - q.r) + 2.0 * std::sinh(p.r) * std::sinh(q.r) * s * s;
  return std::acosh(std::max(1.0, c));
}

struct ConeSpace {
  std::vector<int> baseY;        // ambient indices of the base (empty when standalone)
  std::vector<double> dY;        // m x m induced length metric on the base
  double rho = 1.0;
  int radial_samples = 4;
  std::vector<ConePoint> pts;    // pts[0] = apex, then radial grid, r = i rho / k
  std::vector<double> dist;      // sample metric, exact per the cone formula
  double delta_sample = 0.0;
  double worst_triangle_defect = 0.0;

  int size() const { return static_cast<int>(pts.size()); }
  int base_size() const { return static_cast<int>(dY.empty() ? 0 : std::lround(std::sqrt(static_cast<double>(dY.size())))); }
  double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * pts.size() + j]; }
  double base_d(int a, int b) const {
    int m = base_size();
    return dY[static_cast<std::size_t>(a) * m + b];
  }
  // node index of the grid point (base a, ring i), i = 1..radial_samples
  int grid(int a, int ring) const { return 1 + a * radial_samples + (ring - 1); }
};

namespace detail {

inline double max_four_point_defect(const std::vector<double>& D, int n) {
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          double sa = D[static_cast<std::size_t>(i) * n + j] + D[static_cast<std::size_t>(k) * n + l];
          double sb = D[static_cast<std::size_t>(i) * n + k] + D[static_cast<std::size_t>(j) * n + l];
          double sc = D[static_cast<std::size_t>(i) * n + l] + D[static_cast<std::size_t>(j) * n + k];
          double m1 = std::max({sa, sb, sc});
          double m3 = std::min({sa, sb, sc});
          double m2 = sa + sb + sc - m1 - m3;
          best = std::max(best, 0.5 * (m1 - m2));
        }
  return best;
}

inline double max_triangle_defect(const std::vector<double>& D, int n) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, D[static_cast<std::size_t>(i) * n + j] -
                                    D[static_cast<std::size_t>(i) * n + k] -
                                    D[static_cast<std::size_t>(k) * n + j]);
  return worst;
}

}  // namespace detail

// Cone over a connected subset with its induced length metric, sampled at
// radii i rho / k. The formula restricted to a finite sample is an exact
// metric, so the numeric hyperbolicity of the sample is reported alongside.
inline ConeSpace build_cone_from_metric(std::vector<int> baseY, std::vector<double> dY, double rho,
                                        int radial_samples) {
  if (!(rho > 0)) throw error("build_cone: rho must be positive");
  if (radial_samples < 1) throw error("build_cone: radial_samples must be >= 1");
  int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dY.size()))));
  if (static_cast<std::size_t>(m) * m != dY.size()) throw error("build_cone: base metric not square");
  for (double v : dY)
    if (std::isinf(v)) throw error("build_cone: base not connected for the induced metric");
  ConeSpace cone;
  cone.baseY = std::move(baseY);
  cone.dY = std::move(dY);
  cone.rho = rho;
  cone.radial_samples = radial_samples;
  cone.pts.push_back({-1, 0.0});
  for (int a = 0; a < m; ++a)
    for (int i = 1; i <= radial_samples; ++i)
      cone.pts.push_back({a, rho * i / radial_samples});
  int n = cone.size();
  cone.dist.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ConePoint& p = cone.pts[static_cast<std::size_t>(i)];
      const ConePoint& q = cone.pts[static_cast<std::size_t>(j)];
      double base = (p.is_apex() || q.is_apex()) ? 0.0 : cone.base_d(p.base, q.base);
      cone.dist[static_cast<std::size_t>(i) * n + j] = cone_distance(p, q, rho, base);
    }
  cone.worst_triangle_defect = detail::max_triangle_defect(cone.dist, n);
  cone.delta_sample = detail::max_four_point_defect(cone.dist, n);
  return cone;
}

inline ConeSpace build_cone(const FiniteMetricSpace& X, const SubsetHandle& Y, double rho,
                            int radial_samples = 4) {
  auto dY = induced_length_metric(X, Y);
  return build_cone_from_metric(Y.members, std::move(dY), rho, radial_samples);
}

struct ConeOffNode {
  int kind = 0;  // 0 = base point, 1 = apex, 2 = interior radial sample
  int cone = -1; // family index (kind >= 1)
  int base = -1; // base-space index (kind 0) or local index into the member (kind 2)
  double r = 0;  // radial coordinate (kind 2)
};

// Base space with cones attached along family members and the chain metric
// closed by exact shortest paths over the finite sample. d_SC weights are
// +inf across components except at the identified base points, mirroring
// the disjoint-union construction.
struct ConeOffSpace {
  FiniteMetricSpace base;
  std::vector<SubsetHandle> family;
  std::vector<std::vector<double>> member_metric;  // induced length metric per member
  double rho = 1.0;
  int radial_samples = 4;
  std::vector<ConeOffNode> nodes;
  std::vector<double> chain;  // node metric after the chain (APSP) closure
  std::vector<int> base_node; // base-space index -> node index
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(nodes.size()); }
  double d(int i, int j) const { return chain[static_cast<std::size_t>(i) * nodes.size() + j]; }
  int apex_node(int cone) const {
    for (int i = 0; i < size(); ++i)
      if (nodes[static_cast<std::size_t>(i)].kind == 1 && nodes[static_cast<std::size_t>(i)].cone == cone) return i;
    throw error("apex_node: no such cone");
  }
  // distance of an in-cone node to the base ring of its cone, measured inside the cone
  double cone_depth(int i) const {
    const ConeOffNode& nd = nodes[static_cast<std::size_t>(i)];
    if (nd.kind == 1) return rho;
    if (nd.kind == 2) return rho - nd.r;
    return 0.0;
  }
};

inline ConeOffSpace build_coneoff(const FiniteMetricSpace& X, const std::vector<SubsetHandle>& family,
                                  double rho, int radial_samples = 4, double delta_hint = -1.0,
                                  double rho_min = 0.05) {
  if (!(rho >= rho_min)) throw error("build_coneoff: rho below configured minimum");
  if (radial_samples < 1) throw error("build_coneoff: radial_samples must be >= 1");
  ConeOffSpace out;
  out.base = X;
  out.family = family;
  out.rho = rho;
  out.radial_samples = radial_samples;

  double delta = delta_hint >= 0 ? delta_hint : hyperbolicity_delta(X).delta;
  for (std::size_t qi = 0; qi < family.size(); ++qi) {
    auto sq = strong_quasi_convexity_check(X, family[qi], delta);
    if (!sq.induced_connected)
      throw error("build_coneoff: family member " + std::to_string(qi) + " disconnected");
    if (!sq.strongly_quasi_convex)
      out.warnings.push_back("family member " + std::to_string(qi) +
                             " is not strongly quasi-convex (alpha=" + std::to_string(sq.alpha) +
                             ", gap=" + std::to_string(sq.gap) + ")");
    out.member_metric.push_back(induced_length_metric(X, family[qi]));
  }

  // nodes: base points, then per cone an apex and the interior rings
  out.base_node.assign(static_cast<std::size_t>(X.size()), -1);
  for (int x = 0; x < X.size(); ++x) {
    out.base_node[static_cast<std::size_t>(x)] = static_cast<int>(out.nodes.size());
    out.nodes.push_back({0, -1, x, 0.0});
  }
  for (int qi = 0; qi < static_cast<int>(family.size()); ++qi) {
    out.nodes.push_back({1, qi, -1, 0.0});
    int m = static_cast<int>(family[static_cast<std::size_t>(qi)].members.size());
    for (int a = 0; a < m; ++a)
      for (int i = 1; i < radial_samples; ++i)
        out.nodes.push_back({2, qi, a, rho * i / radial_samples});
  }

  int n = out.size();
  double inf = std::numeric_limits<double>::infinity();
  std::vector<double> w(static_cast<std::size_t>(n) * n, inf);
  auto set_w = [&](int i, int j, double v) {
    double& cell = w[static_cast<std::size_t>(i) * n + j];
    cell = std::min(cell, v);
    w[static_cast<std::size_t>(j) * n + i] = cell;
  };
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i) * n + i] = 0.0;

  // base component
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y) set_w(out.base_node[static_cast<std::size_t>(x)], out.base_node[static_cast<std::size_t>(y)], X.d(x, y));

  // cone components: the r = rho ring is the identified base point itself
  auto cone_pt = [&](const ConeOffNode& nd, int qi) -> ConePoint {
    if (nd.kind == 1) return ConePoint{-1, 0.0};
    if (nd.kind == 2) return ConePoint{nd.base, nd.r};
    // base node inside member qi
    const auto& mem = out.family[static_cast<std::size_t>(qi)].members;
    auto it = std::find(mem.begin(), mem.end(), nd.base);
    return ConePoint{static_cast<int>(it - mem.begin()), rho};
  };
  for (int qi = 0; qi < static_cast<int>(family.size()); ++qi) {
    std::vector<int> cone_nodes;
    for (int i = 0; i < n; ++i) {
      const ConeOffNode& nd = out.nodes[static_cast<std::size_t>(i)];
      if ((nd.kind != 0 && nd.cone == qi) ||
          (nd.kind == 0 && family[static_cast<std::size_t>(qi)].contains(nd.base)))
        cone_nodes.push_back(i);
    }
    int m = static_cast<int>(family[static_cast<std::size_t>(qi)].members.size());
    auto& dY = out.member_metric[static_cast<std::size_t>(qi)];
    for (std::size_t a = 0; a < cone_nodes.size(); ++a)
      for (std::size_t b = a + 1; b < cone_nodes.size(); ++b) {
        ConePoint p = cone_pt(out.nodes[static_cast<std::size_t>(cone_nodes[a])], qi);
        ConePoint q = cone_pt(out.nodes[static_cast<std::size_t>(cone_nodes[b])], qi);
        double base = (p.is_apex() || q.is_apex()) ? 0.0 : dY[static_cast<std::size_t>(p.base) * m + q.base];
        set_w(cone_nodes[a], cone_nodes[b], cone_distance(p, q, rho, base));
      }
  }

  // chain closure: exact shortest paths over the sample
  out.chain = std::move(w);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double dik = out.chain[static_cast<std::size_t>(i) * n + k];
      if (std::isinf(dik)) continue;
      for (int j = 0; j < n; ++j) {
        double cand = dik + out.chain[static_cast<std::size_t>(k) * n + j];
        if (cand < out.chain[static_cast<std::size_t>(i) * n + j])
          out.chain[static_cast<std::size_t>(i) * n + j] = cand;
      }
    }
  return out;
}

struct SandwichCheck {
  bool ok = true;
  double worst_lower = 0.0;  // max of mu(d_X) - d_chain (must be <= tol)
  double worst_upper = 0.0;  // max of d_chain - d_X   (must be <= tol)
};

// mu(d_X(x,x')) <= d_coneoff(x,x') <= d_X(x,x') on every base pair.
inline SandwichCheck check_sandwich(const ConeOffSpace& co, double tol = kDefaultTol) {
  SandwichCheck out;
  int nb = co.base.size();
  for (int x = 0; x < nb; ++x)
    for (int y = 0; y < nb; ++y) {
      double dc = co.d(co.base_node[static_cast<std::size_t>(x)], co.base_node[static_cast<std::size_t>(y)]);
      double dx = co.base.d(x, y);
      out.worst_lower = std::max(out.worst_lower, mu(dx, co.rho) - dc);
      out.worst_upper = std::max(out.worst_upper, dc - dx);
    }
  out.ok = out.worst_lower <= tol && out.worst_upper <= tol;
  return out;
}

struct ConeBallReport {
  std::int64_t pairs_checked = 0;
  std::int64_t violations = 0;
  bool ok() const { return violations == 0; }
};

// Interior of a cone is metrically isolated: when d(x, x') is smaller than
// x's depth inside its cone, x' lies in the same cone and the chain
// distance agrees with the cone formula.
inline ConeBallReport verify_cone_ball(const ConeOffSpace& co, double tol = kDefaultTol) {
  ConeBallReport rep;
  int n = co.size();
  for (int i = 0; i < n; ++i) {
    const ConeOffNode& nd = co.nodes[static_cast<std::size_t>(i)];
    if (nd.kind == 0) continue;  // interior nodes only
    double depth = co.cone_depth(i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      ++rep.pairs_checked;
      if (co.d(i, j) < depth - tol) {
        const ConeOffNode& other = co.nodes[static_cast<std::size_t>(j)];
        bool same_cone = (other.kind != 0 && other.cone == nd.cone) ||
                         (other.kind == 0 && co.family[static_cast<std::size_t>(nd.cone)].contains(other.base));
        if (!same_cone) ++rep.violations;
      }
    }
  }
  return rep;
}

struct RotationDisplacement {
  double value = 0.0;
  double twice_radius = 0.0;
  bool lemma_applicable = false;  // min displacement of h on Y >= pi sinh rho
  bool equality = false;
};

// Displacement of a rotation h of the base at a cone point (y, r): equals
// 2r whenever h moves every base point at least pi sinh rho.
inline RotationDisplacement rotation_displacement(const ConeSpace& cone,
                                                  const std::vector<int>& h, int pt,
                                                  double tol = kDefaultTol) {
  int m = cone.base_size();
  if (static_cast<int>(h.size()) != m) throw error("rotation_displacement: mapping size mismatch");
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (std::fabs(cone.base_d(h[static_cast<std::size_t>(a)], h[static_cast<std::size_t>(b)]) - cone.base_d(a, b)) > tol)
        throw error("rotation_displacement: h is not an isometry of the base");
  double min_disp = std::numeric_limits<double>::infinity();
  for (int a = 0; a < m; ++a) min_disp = std::min(min_disp, cone.base_d(h[static_cast<std::size_t>(a)], a));
  RotationDisplacement out;
  out.lemma_applicable = min_disp >= M_PI * std::sinh(cone.rho) - tol;
  const ConePoint& p = cone.pts[static_cast<std::size_t>(pt)];
  if (p.is_apex()) {
    out.value = 0.0;
    out.twice_radius = 0.0;
    out.equality = true;
    return out;
  }
  ConePoint q{h[static_cast<std::size_t>(p.base)], p.r};
  out.value = cone_distance(p, q, cone.rho, cone.base_d(p.base, q.base));
  out.twice_radius = 2 * p.r;
  out.equality = std::fabs(out.value - out.twice_radius) <= tol;
  return out;
}

struct QuotientCone {
  ConeSpace quotient;               // cone sample over the orbit space
  std::vector<int> rep_of;          // sample point -> index of chosen orbit representative
  double min_rotation = 0.0;        // l = min displacement over nontrivial powers
  std::int64_t equality_pairs = 0;  // pairs in the lemma's range, equality verified
  std::int64_t checked_pairs = 0;
};

// Quotient of a cone by a cyclic rotation group generated by h. Distances
// in the quotient are orbit minima; pairs with d_Y(y,y') <= l - pi sinh rho
// keep their distances exactly.
inline QuotientCone quotient_cone(const ConeSpace& cone, const std::vector<int>& h,
                                  double tol = kDefaultTol) {
  int m = cone.base_size();
  if (static_cast<int>(h.size()) != m) throw error("quotient_cone: mapping size mismatch");
  // powers h^1, ..., h^ord = id
  std::vector<std::vector<int>> powers;
  std::vector<int> cur(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) cur[static_cast<std::size_t>(a)] = a;
  for (;;) {
    std::vector<int> nxt(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) nxt[static_cast<std::size_t>(a)] = h[static_cast<std::size_t>(cur[static_cast<std::size_t>(a)])];
    cur = std::move(nxt);
    bool is_id = true;
    for (int a = 0; a < m; ++a)
      if (cur[static_cast<std::size_t>(a)] != a) is_id = false;
    powers.push_back(cur);
    if (is_id) break;
    if (powers.size() > 100000) throw error("quotient_cone: rotation order too large");
  }
  int ord = static_cast<int>(powers.size());  // powers[k] = h^{k+1}, powers[ord-1] = id
  double l = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < ord; ++k) {
    for (int a = 0; a < m; ++a)
      l = std::min(l, cone.base_d(powers[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)], a));
  }
  if (ord == 1) l = std::numeric_limits<double>::infinity();  // trivial group
  QuotientCone out;
  out.min_rotation = l;
  if (ord > 1 && l < 2 * M_PI * std::sinh(cone.rho) - tol)
    throw error("quotient_cone: minimal rotation below 2 pi sinh rho");

  // orbit representatives on the base
  std::vector<int> orbit_rep(static_cast<std::size_t>(m), -1);
  std::vector<int> reps;
  for (int a = 0; a < m; ++a) {
    if (orbit_rep[static_cast<std::size_t>(a)] >= 0) continue;
    int rep = static_cast<int>(reps.size());
    int x = a;
    for (int k = 0; k < ord; ++k) {
      orbit_rep[static_cast<std::size_t>(x)] = rep;
      x = h[static_cast<std::size_t>(x)];
    }
    reps.push_back(a);
  }
  int qm = static_cast<int>(reps.size());
  // quotient base metric: min over orbit translates
  std::vector<double> qdY(static_cast<std::size_t>(qm) * qm, 0.0);
  for (int a = 0; a < qm; ++a)
    for (int b = 0; b < qm; ++b) {
      double best = std::numeric_limits<double>::infinity();
      int y = reps[static_cast<std::size_t>(b)];
      for (int k = 0; k < ord; ++k) {
        best = std::min(best, cone.base_d(reps[static_cast<std::size_t>(a)], y));
        y = h[static_cast<std::size_t>(y)];
      }
      qdY[static_cast<std::size_t>(a) * qm + b] = best;
    }
  out.quotient = build_cone_from_metric({}, std::move(qdY), cone.rho, cone.radial_samples);

  // lemma check: close pairs keep their distances
  out.rep_of.assign(cone.pts.size(), -1);
  for (std::size_t i = 0; i < cone.pts.size(); ++i) {
    const ConePoint& p = cone.pts[i];
    out.rep_of[i] = p.is_apex() ? 0 : orbit_rep[static_cast<std::size_t>(p.base)];
  }
  for (int i = 0; i < cone.size(); ++i)
    for (int j = 0; j < cone.size(); ++j) {
      const ConePoint& p = cone.pts[static_cast<std::size_t>(i)];
      const ConePoint& q = cone.pts[static_cast<std::size_t>(j)];
      if (p.is_apex() || q.is_apex()) continue;
      // quotient distance: min over translates of j
      double dq = std::numeric_limits<double>::infinity();
      {
        int y = q.base;
        for (int k = 0; k < ord; ++k) {
          dq = std::min(dq, cone_distance(p, ConePoint{y, q.r}, cone.rho, cone.base_d(p.base, y)));
          y = h[static_cast<std::size_t>(y)];
        }
      }
      ++out.checked_pairs;
      if (ord > 1 && cone.base_d(p.base, q.base) <= l - M_PI * std::sinh(cone.rho) + tol) {
        ++out.equality_pairs;
        if (std::fabs(dq - cone.d(i, j)) > 1e-6)
          throw error("quotient_cone: lemma equality violated on a qualifying pair");
      } else if (dq > cone.d(i, j) + tol) {
        throw error("quotient_cone: quotient increased a distance");
      }
    }
  return out;
}

struct ExtendedAction {
  std::vector<int> node_map;   // node permutation of the cone-off sample
  std::vector<int> cone_map;   // family permutation
  double max_deviation = 0.0;  // worst |d(gx, gx') - d(x, x')|
};

// Extends a base isometry that permutes the family to the whole sample:
// base points by g, cone points (y, r) -> (g y, r) into the image cone.
inline ExtendedAction extend_action(const ConeOffSpace& co, const std::vector<int>& g,
                                    double tol = kDefaultTol) {
  int nb = co.base.size();
  if (static_cast<int>(g.size()) != nb) throw error("extend_action: base map size mismatch");
  for (int x = 0; x < nb; ++x)
    if (g[static_cast<std::size_t>(x)] < 0 || g[static_cast<std::size_t>(x)] >= nb)
      throw error("extend_action: base map must be total on the sample window");
  for (int x = 0; x < nb; ++x)
    for (int y = 0; y < nb; ++y)
      if (std::fabs(co.base.d(g[static_cast<std::size_t>(x)], g[static_cast<std::size_t>(y)]) - co.base.d(x, y)) > tol)
        throw error("extend_action: g is not an isometry of the base");

  ExtendedAction out;
  int q = static_cast<int>(co.family.size());
  out.cone_map.assign(static_cast<std::size_t>(q), -1);
  for (int i = 0; i < q; ++i) {
    std::vector<int> img;
    for (int y : co.family[static_cast<std::size_t>(i)].members) img.push_back(g[static_cast<std::size_t>(y)]);
    std::sort(img.begin(), img.end());
    for (int j = 0; j < q; ++j)
      if (img == co.family[static_cast<std::size_t>(j)].members) {
        out.cone_map[static_cast<std::size_t>(i)] = j;
        break;
      }
    if (out.cone_map[static_cast<std::size_t>(i)] < 0)
      throw error("extend_action: g does not permute the family");
  }

  int n = co.size();
  out.node_map.assign(static_cast<std::size_t>(n), -1);
  auto radial_node = [&](int cone, int local, double r) {
    for (int i = 0; i < n; ++i) {
      const ConeOffNode& nd = co.nodes[static_cast<std::size_t>(i)];
      if (nd.kind == 2 && nd.cone == cone && nd.base == local && std::fabs(nd.r - r) <= tol)
        return i;
    }
    throw error("extend_action: missing radial node");
  };
  for (int i = 0; i < n; ++i) {
    const ConeOffNode& nd = co.nodes[static_cast<std::size_t>(i)];
    if (nd.kind == 0) {
      out.node_map[static_cast<std::size_t>(i)] = co.base_node[static_cast<std::size_t>(g[static_cast<std::size_t>(nd.base)])];
    } else if (nd.kind == 1) {
      out.node_map[static_cast<std::size_t>(i)] = co.apex_node(out.cone_map[static_cast<std::size_t>(nd.cone)]);
    } else {
      int src_cone = nd.cone;
      int dst_cone = out.cone_map[static_cast<std::size_t>(src_cone)];
      int ambient = co.family[static_cast<std::size_t>(src_cone)].members[static_cast<std::size_t>(nd.base)];
      int img_ambient = g[static_cast<std::size_t>(ambient)];
      const auto& mem = co.family[static_cast<std::size_t>(dst_cone)].members;
      auto it = std::lower_bound(mem.begin(), mem.end(), img_ambient);
      if (it == mem.end() || *it != img_ambient)
        throw error("extend_action: image base point missing from image cone");
      out.node_map[static_cast<std::size_t>(i)] = radial_node(dst_cone, static_cast<int>(it - mem.begin()), nd.r);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a = co.d(out.node_map[static_cast<std::size_t>(i)], out.node_map[static_cast<std::size_t>(j)]);
      double b = co.d(i, j);
      if (!std::isinf(a) && !std::isinf(b))
        out.max_deviation = std::max(out.max_deviation, std::fabs(a - b));
    }
  if (out.max_deviation > 1e-6) throw error("extend_action: extension is not isometric on the sample");
  return out;
}

}  // namespace ccl
