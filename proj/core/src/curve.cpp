#include "glpin/curve.hpp"

#include "glpin/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace glpin {

namespace {

double point_seg_dist(Vec3 p, Vec3 a, Vec3 b, double* t_out = nullptr) {
  Vec3 u = b - a;
  double uu = dot(u, u);
  double t = uu > 0 ? std::clamp(dot(p - a, u) / uu, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return (p - (a + u * t)).norm();
}

double seg_seg_dist(Vec3 a0, Vec3 a1, Vec3 b0, Vec3 b1) {
  // Clamped closest approach of two segments.
  Vec3 u = a1 - a0, v = b1 - b0, w = a0 - b0;
  double A = dot(u, u), B = dot(u, v), C = dot(v, v);
  double D = dot(u, w), E = dot(v, w);
  double den = A * C - B * B;
  double sc, tc;
  if (den < 1e-14 * A * C + 1e-300) {
    sc = 0;
    tc = C > 0 ? E / C : 0;
  } else {
    sc = (B * E - C * D) / den;
    tc = (A * E - B * D) / den;
  }
  sc = std::clamp(sc, 0.0, 1.0);
  tc = std::clamp(tc, 0.0, 1.0);
  // one clamp round-trip to tighten the corner cases
  if (A > 0) sc = std::clamp((B * tc - D) / A, 0.0, 1.0);
  if (C > 0) tc = std::clamp((B * sc + E) / C, 0.0, 1.0);
  return ((a0 + u * sc) - (b0 + v * tc)).norm();
}

Vec3 rotate_about(Vec3 x, Vec3 axis, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return x * c + cross(axis, x) * s + axis * (dot(axis, x) * (1 - c));
}

}  // namespace

double PolyCurve::total_length() const {
  if (pts.size() < 2) return 0;
  double L = s.back();
  if (closed) L += (pts.front() - pts.back()).norm();
  return L;
}

double PolyCurve::wrap_s(double sv) const {
  double L = total_length();
  if (L <= 0) return 0;
  if (closed) {
    sv = std::fmod(sv, L);
    if (sv < 0) sv += L;
    return sv;
  }
  return std::clamp(sv, 0.0, L);
}

int PolyCurve::locate(double sv, double& t) const {
  sv = wrap_s(sv);
  int n = seg_count();
  auto it = std::upper_bound(s.begin(), s.end(), sv);
  int i = std::clamp(int(it - s.begin()) - 1, 0, n - 1);
  Vec3 a, b;
  seg(i, a, b);
  double len = (b - a).norm();
  t = len > 0 ? std::clamp((sv - s[size_t(i)]) / len, 0.0, 1.0) : 0.0;
  return i;
}

Vec3 PolyCurve::point_at(double sv) const {
  double t;
  int i = locate(sv, t);
  Vec3 a, b;
  seg(i, a, b);
  return a + (b - a) * t;
}

namespace {
// Unit tangent at each vertex: normalized mean of adjacent segment directions.
std::vector<Vec3> vertex_tangents(const PolyCurve& c) {
  int n = int(c.pts.size());
  int ns = c.seg_count();
  std::vector<Vec3> dir(static_cast<size_t>(ns));
  for (int i = 0; i < ns; ++i) {
    Vec3 a, b;
    c.seg(i, a, b);
    dir[size_t(i)] = (b - a).normalized();
  }
  std::vector<Vec3> t(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec3 acc{0, 0, 0};
    if (c.closed) {
      acc = dir[size_t((i - 1 + ns) % ns)] + dir[size_t(i % ns)];
    } else {
      if (i > 0) acc = acc + dir[size_t(i - 1)];
      if (i < ns) acc = acc + dir[size_t(i)];
    }
    double m = acc.norm();
    t[size_t(i)] = m > 1e-14 ? acc / m : dir[size_t(std::min(i, ns - 1))];
  }
  return t;
}

// Discrete curvature vector (d tangent / ds) at each vertex.
std::vector<Vec3> vertex_curvatures(const PolyCurve& c) {
  int n = int(c.pts.size());
  int ns = c.seg_count();
  std::vector<Vec3> dir(static_cast<size_t>(ns));
  std::vector<double> len(static_cast<size_t>(ns));
  for (int i = 0; i < ns; ++i) {
    Vec3 a, b;
    c.seg(i, a, b);
    len[size_t(i)] = (b - a).norm();
    dir[size_t(i)] = (b - a) / len[size_t(i)];
  }
  std::vector<Vec3> K(size_t(n), Vec3{0, 0, 0});
  for (int i = 0; i < n; ++i) {
    int ip = i - 1, ic = i;
    if (c.closed) {
      ip = (i - 1 + ns) % ns;
      ic = i % ns;
    } else if (i == 0 || i >= ns) {
      continue;  // straight one-sided ends
    }
    double denom = len[size_t(ip)] + len[size_t(ic)];
    if (denom > 0)
      K[size_t(i)] = (dir[size_t(ic)] - dir[size_t(ip)]) * (2.0 / denom);
  }
  return K;
}
}  // namespace

Vec3 PolyCurve::tangent_at(double sv) const {
  double t;
  int i = locate(sv, t);
  auto vt = vertex_tangents(*this);
  int n = int(pts.size());
  Vec3 a = vt[size_t(i)], b = vt[size_t((i + 1) % n)];
  Vec3 m = a * (1 - t) + b * t;
  double nm = m.norm();
  return nm > 1e-14 ? m / nm : a;
}

Vec3 PolyCurve::curvature_at(double sv) const {
  double t;
  int i = locate(sv, t);
  auto vk = vertex_curvatures(*this);
  int n = int(pts.size());
  return vk[size_t(i)] * (1 - t) + vk[size_t((i + 1) % n)] * t;
}

PolyCurve make_poly_curve(std::vector<Vec3> pts, bool closed) {
  if (pts.size() < 2) throw GeometryError("curve needs at least 2 vertices");
  if (closed && pts.size() >= 2 &&
      (pts.front() - pts.back()).norm() < 1e-12) {
    pts.pop_back();  // drop duplicated closing vertex
  }
  if (closed && pts.size() < 3)
    throw GeometryError("closed curve needs at least 3 vertices");
  PolyCurve c;
  c.closed = closed;
  c.pts = std::move(pts);
  c.s.resize(c.pts.size());
  c.s[0] = 0;
  for (size_t i = 1; i < c.pts.size(); ++i) {
    double len = (c.pts[i] - c.pts[i - 1]).norm();
    if (len < 1e-12) throw GeometryError("consecutive curve vertices coincide");
    c.s[i] = c.s[i - 1] + len;
  }
  if (closed && (c.pts.front() - c.pts.back()).norm() < 1e-12)
    throw GeometryError("consecutive curve vertices coincide");
  return c;
}

PolyCurve resample(const PolyCurve& c, double target_ds) {
  if (target_ds <= 0) throw GeometryError("resample step must be positive");
  double L = c.total_length();
  int n = std::max(2, int(std::ceil(L / target_ds)));
  std::vector<Vec3> pts;
  if (c.closed) {
    n = std::max(n, 3);
    pts.reserve(size_t(n));
    for (int i = 0; i < n; ++i) pts.push_back(c.point_at(L * i / n));
  } else {
    pts.reserve(size_t(n) + 1);
    for (int i = 0; i <= n; ++i) pts.push_back(c.point_at(L * i / n));
  }
  return make_poly_curve(std::move(pts), c.closed);
}

double min_separation(const PolyCurve& c) {
  int ns = c.seg_count();
  int n = int(c.pts.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ns; ++i)
    for (int j = i + 2; j < ns; ++j) {
      if (c.closed && i == 0 && j == ns - 1) continue;  // wrap-adjacent
      Vec3 a0, a1, b0, b1;
      c.seg(i, a0, a1);
      c.seg(j, b0, b1);
      best = std::min(best, seg_seg_dist(a0, a1, b0, b1));
    }
  (void)n;
  return best;
}

FramedCurve build_frame(const PolyCurve& curve) {
  if (curve.seg_count() < 2) throw GeometryError("build_frame needs >= 2 segments");
  FramedCurve fc;
  fc.curve = curve;
  fc.tangent = vertex_tangents(curve);
  int n = int(curve.pts.size());
  fc.e1.resize(size_t(n));
  fc.e2.resize(size_t(n));
  fc.e1[0] = any_orthogonal(fc.tangent[0]);

  // Double-reflection parallel transport of e1 along the polyline.
  auto transport = [&](Vec3 x0, Vec3 x1, Vec3 t0, Vec3 t1, Vec3 e) {
    Vec3 v1 = x1 - x0;
    double c1 = dot(v1, v1);
    if (c1 < 1e-28) return e;
    Vec3 rL = e - v1 * (2.0 / c1 * dot(v1, e));
    Vec3 tL = t0 - v1 * (2.0 / c1 * dot(v1, t0));
    Vec3 v2 = t1 - tL;
    double c2 = dot(v2, v2);
    Vec3 out = c2 < 1e-28 ? rL : rL - v2 * (2.0 / c2 * dot(v2, rL));
    out = out - t1 * dot(out, t1);
    return out.normalized();
  };
  for (int i = 1; i < n; ++i)
    fc.e1[size_t(i)] = transport(curve.pts[size_t(i - 1)], curve.pts[size_t(i)],
                                 fc.tangent[size_t(i - 1)], fc.tangent[size_t(i)],
                                 fc.e1[size_t(i - 1)]);
  if (curve.closed) {
    Vec3 back = transport(curve.pts[size_t(n - 1)], curve.pts[0],
                          fc.tangent[size_t(n - 1)], fc.tangent[0],
                          fc.e1[size_t(n - 1)]);
    double ca = std::clamp(dot(back, fc.e1[0]), -1.0, 1.0);
    double sa = dot(cross(fc.e1[0], back), fc.tangent[0]);
    double defect = std::atan2(sa, ca);
    fc.closure_defect_deg = std::abs(defect) * 180.0 / M_PI;
    // Spread the holonomy so the frame closes up.
    double L = curve.total_length();
    for (int i = 1; i < n; ++i) {
      double ang = -defect * curve.s[size_t(i)] / L;
      Vec3 e = rotate_about(fc.e1[size_t(i)], fc.tangent[size_t(i)], ang);
      e = e - fc.tangent[size_t(i)] * dot(e, fc.tangent[size_t(i)]);
      fc.e1[size_t(i)] = e.normalized();
    }
  }
  for (int i = 0; i < n; ++i)
    fc.e2[size_t(i)] = cross(fc.tangent[size_t(i)], fc.e1[size_t(i)]);
  return fc;
}

FrameSample FramedCurve::frame_at(double sv) const {
  double t;
  int i = curve.locate(sv, t);
  int n = int(curve.pts.size());
  int j = (i + 1) % n;
  Vec3 tt = (tangent[size_t(i)] * (1 - t) + tangent[size_t(j)] * t).normalized();
  Vec3 e = e1[size_t(i)] * (1 - t) + e1[size_t(j)] * t;
  e = e - tt * dot(e, tt);
  double nm = e.norm();
  e = nm > 1e-14 ? e / nm : any_orthogonal(tt);
  return {tt, e, cross(tt, e)};
}

SegmentBVH::SegmentBVH(const PolyCurve& curve) {
  int ns = curve.seg_count();
  a_.resize(size_t(ns));
  b_.resize(size_t(ns));
  s_at_a_.resize(size_t(ns));
  seg_len_.resize(size_t(ns));
  for (int i = 0; i < ns; ++i) {
    curve.seg(i, a_[size_t(i)], b_[size_t(i)]);
    s_at_a_[size_t(i)] = curve.s[size_t(i)];
    seg_len_[size_t(i)] = (b_[size_t(i)] - a_[size_t(i)]).norm();
  }
  std::vector<int> idx(static_cast<size_t>(ns));
  for (int i = 0; i < ns; ++i) idx[size_t(i)] = i;
  nodes_.reserve(size_t(2 * ns));
  build(idx, 0, ns);
  order_ = std::move(idx);
}

int SegmentBVH::build(std::vector<int>& idx, int begin, int end) {
  Node nd;
  nd.lo = Vec3{1e300, 1e300, 1e300};
  nd.hi = Vec3{-1e300, -1e300, -1e300};
  for (int i = begin; i < end; ++i) {
    int si = idx[size_t(i)];
    for (int a = 0; a < 3; ++a) {
      nd.lo[a] = std::min({nd.lo[a], a_[size_t(si)][a], b_[size_t(si)][a]});
      nd.hi[a] = std::max({nd.hi[a], a_[size_t(si)][a], b_[size_t(si)][a]});
    }
  }
  int self = int(nodes_.size());
  nodes_.push_back(nd);
  if (end - begin <= 4) {
    nodes_[size_t(self)].begin = begin;
    nodes_[size_t(self)].end = end;
    return self;
  }
  int axis = 0;
  Vec3 ext = nd.hi - nd.lo;
  if (ext.y > ext.x) axis = 1;
  if (ext.z > ext[axis]) axis = 2;
  int mid = (begin + end) / 2;
  std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end,
                   [&](int p, int q) {
                     return a_[size_t(p)][axis] + b_[size_t(p)][axis] <
                            a_[size_t(q)][axis] + b_[size_t(q)][axis];
                   });
  int l = build(idx, begin, mid);
  int r = build(idx, mid, end);
  nodes_[size_t(self)].left = l;
  nodes_[size_t(self)].right = r;
  return self;
}

double SegmentBVH::distance(Vec3 p, int* seg, double* t) const {
  double best = std::numeric_limits<double>::infinity();
  int best_seg = -1;
  double best_t = 0;
  int stack[64];
  int top = 0;
  stack[top++] = 0;
  auto box_dist = [&](const Node& nd) {
    double d2 = 0;
    for (int a = 0; a < 3; ++a) {
      double v = p[a] < nd.lo[a] ? nd.lo[a] - p[a]
                                 : (p[a] > nd.hi[a] ? p[a] - nd.hi[a] : 0);
      d2 += v * v;
    }
    return std::sqrt(d2);
  };
  while (top > 0) {
    const Node& nd = nodes_[size_t(stack[--top])];
    if (box_dist(nd) >= best) continue;
    if (nd.left < 0) {
      for (int i = nd.begin; i < nd.end; ++i) {
        int si = order_[size_t(i)];
        double ti;
        double d = point_seg_dist(p, a_[size_t(si)], b_[size_t(si)], &ti);
        if (d < best) {
          best = d;
          best_seg = si;
          best_t = ti;
        }
      }
    } else {
      double dl = box_dist(nodes_[size_t(nd.left)]);
      double dr = box_dist(nodes_[size_t(nd.right)]);
      // push the farther child first so the nearer is explored next
      if (dl <= dr) {
        if (dr < best) stack[top++] = nd.right;
        if (dl < best) stack[top++] = nd.left;
      } else {
        if (dl < best) stack[top++] = nd.left;
        if (dr < best) stack[top++] = nd.right;
      }
    }
  }
  if (seg) *seg = best_seg;
  if (t) *t = best_t;
  return best;
}

Tube::Tube(FramedCurve f, double d) : fc(std::move(f)), delta(d), bvh(fc.curve) {}

std::optional<CurveCoords> Tube::coords(Vec3 x) const {
  int seg;
  double t;
  double d = bvh.distance(x, &seg, &t);
  if (!(d < delta) || seg < 0) return std::nullopt;
  double sv = bvh.s_at_a_[size_t(seg)] + t * bvh.seg_len_[size_t(seg)];
  FrameSample fr = fc.frame_at(sv);
  Vec3 perp = x - fc.curve.point_at(sv);
  return CurveCoords{sv, dot(perp, fr.e1), dot(perp, fr.e2)};
}

Vec3 Tube::reconstruct(const CurveCoords& c) const {
  FrameSample fr = fc.frame_at(c.s);
  return fc.curve.point_at(c.s) + fr.e1 * c.v + fr.e2 * c.w;
}

Tube make_tube(FramedCurve fc, double delta) {
  if (delta <= 0) throw GeometryError("tube thickness must be positive");
  const PolyCurve& c = fc.curve;
  double reach = std::numeric_limits<double>::infinity();
  double kmax = 0;
  for (const Vec3& k : vertex_curvatures(c)) kmax = std::max(kmax, k.norm());
  if (kmax > 1e-12) reach = 1.0 / kmax;

  // Doubling constraint: distant strands coming close. A pair only counts as
  // doubling back when the two segments sit closer than the chord of the
  // tightest circle could bring points with their arc separation.
  auto chord_floor = [&](double gap) {
    if (kmax * gap <= 1e-9) return gap;
    if (gap >= M_PI / kmax) return 2.0 / kmax;
    return 2.0 / kmax * std::sin(kmax * gap / 2);
  };
  int ns = c.seg_count();
  double L = c.total_length();
  for (int i = 0; i < ns; ++i)
    for (int j = i + 2; j < ns; ++j) {
      if (c.closed && i == 0 && j == ns - 1) continue;
      Vec3 a0, a1, b0, b1;
      c.seg(i, a0, a1);
      c.seg(j, b0, b1);
      // arc separation between the nearest points of the two segments
      double gap = (c.s[size_t(j)] - c.s[size_t(i)]) - (a1 - a0).norm();
      if (c.closed)
        gap = std::min(gap, L - (c.s[size_t(j)] - c.s[size_t(i)]) - (b1 - b0).norm());
      double d = seg_seg_dist(a0, a1, b0, b1);
      if (d < 0.9 * chord_floor(gap)) reach = std::min(reach, d / 2);
    }
  if (delta >= reach)
    throw GeometryError("tube thickness exceeds curve reach");
  return Tube(std::move(fc), delta);
}

double volume_jacobian(double s, double v, double w, const Tube& tube) {
  FrameSample fr = tube.fc.frame_at(s);
  Vec3 K = tube.fc.curve.curvature_at(s);
  Vec3 perp = fr.e1 * v + fr.e2 * w;
  return 1.0 - dot(perp, K);
}

namespace {
// Integrates f(point) ds over the part of [a,b] inside the domain (or all of
// it when dom is null), with the segment already short enough to treat the
// boundary crossing as a single bisection.
template <class F>
double seg_integral(Vec3 a, Vec3 b, const Domain* dom, F&& f) {
  double len = (b - a).norm();
  if (len == 0) return 0;
  bool ina = !dom || dom->inside(a);
  bool inb = !dom || dom->inside(b);
  if (!ina && !inb) return 0;
  if (ina && inb) return 0.5 * (f(a) + f(b)) * len;
  // one endpoint inside: bisect for the crossing
  Vec3 lo = a, hi = b;  // keep lo inside
  if (!ina) std::swap(lo, hi);
  Vec3 p = lo, q = hi;
  for (int it = 0; it < 60; ++it) {
    Vec3 m = (p + q) * 0.5;
    if (dom->inside(m))
      p = m;
    else
      q = m;
  }
  Vec3 cps = (p + q) * 0.5;
  return 0.5 * (f(lo) + f(cps)) * (cps - lo).norm();
}
}  // namespace

double weighted_length(const PolyCurve& curve, const ScalarField& rho,
                       const Domain* domain) {
  double step = rho.grid.h / 2;
  double acc = 0;
  bool any_inside = false;
  int ns = curve.seg_count();
  for (int i = 0; i < ns; ++i) {
    Vec3 a, b;
    curve.seg(i, a, b);
    int m = std::max(1, int(std::ceil((b - a).norm() / step)));
    for (int k = 0; k < m; ++k) {
      Vec3 p = a + (b - a) * (double(k) / m);
      Vec3 q = a + (b - a) * (double(k + 1) / m);
      if (domain && (domain->inside(p) || domain->inside(q))) any_inside = true;
      acc += seg_integral(p, q, domain, [&](Vec3 x) {
        double r = interp(rho, x);
        return r * r;
      });
    }
  }
  if (domain && !any_inside) {
    std::fprintf(stderr, "warning: curve lies entirely outside the domain\n");
    return 0;
  }
  return acc;
}

double length_inside(const PolyCurve& curve, const Domain& domain) {
  double step = domain.radius / 512;
  double acc = 0;
  int ns = curve.seg_count();
  for (int i = 0; i < ns; ++i) {
    Vec3 a, b;
    curve.seg(i, a, b);
    int m = std::max(1, int(std::ceil((b - a).norm() / step)));
    for (int k = 0; k < m; ++k) {
      Vec3 p = a + (b - a) * (double(k) / m);
      Vec3 q = a + (b - a) * (double(k + 1) / m);
      acc += seg_integral(p, q, &domain, [](Vec3) { return 1.0; });
    }
  }
  return acc;
}

TransversalityReport transversality(const PolyCurve& curve,
                                    const Domain& domain) {
  TransversalityReport rep;
  double L = curve.total_length();
  double step = std::min(domain.radius / 256, L / 16);
  int m = std::max(16, int(std::ceil(L / step)));
  double prev_d = domain.dist(curve.point_at(0));
  double graze_tol = 1e-4 * domain.radius;
  for (int i = 1; i <= m; ++i) {
    double s1 = L * i / m;
    double d1 = domain.dist(curve.point_at(s1));
    double s0 = L * (i - 1) / m;
    if ((prev_d < 0) != (d1 < 0)) {
      double lo = s0, hi = s1;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if ((domain.dist(curve.point_at(mid)) < 0) == (prev_d < 0))
          lo = mid;
        else
          hi = mid;
      }
      double sc = 0.5 * (lo + hi);
      Vec3 x = curve.point_at(sc);
      Vec3 nu = domain.normal(x);
      Vec3 t = curve.tangent_at(sc);
      double sina = std::clamp(std::abs(dot(t, nu)), 0.0, 1.0);
      double ang = std::asin(sina) * 180.0 / M_PI;
      Crossing cr{sc, x, ang, ang < 5.0};
      if (cr.flagged) rep.ok = false;
      rep.crossings.push_back(cr);
    } else if (std::abs(d1) < graze_tol && std::abs(prev_d) < graze_tol) {
      rep.ok = false;  // grazing touch without a sign flip
    }
    prev_d = d1;
  }
  return rep;
}

PolyCurve extend_and_close(const PolyCurve& curve, const Domain& domain,
                           double ext_len, double clearance) {
  if (curve.closed) return curve;
  if (ext_len <= 0 || clearance <= 0)
    throw GeometryError("extension parameters must be positive");
  double L = curve.total_length();
  Vec3 t0 = curve.tangent_at(0);
  Vec3 t1 = curve.tangent_at(L);
  Vec3 H = curve.pts.front() - t0 * ext_len;
  Vec3 T = curve.pts.back() + t1 * ext_len;
  if (domain.dist(H) <= 0 || domain.dist(T) <= 0)
    throw GeometryError("extended endpoints do not leave the domain");
  double r_arc = std::max({domain.radius + clearance,
                           (H - domain.center).norm(),
                           (T - domain.center).norm()});
  Vec3 uT = (T - domain.center).normalized();
  Vec3 uH = (H - domain.center).normalized();
  std::vector<Vec3> pts;
  pts.push_back(H);
  for (const Vec3& p : curve.pts) pts.push_back(p);
  pts.push_back(T);
  Vec3 P = domain.center + uT * r_arc;
  Vec3 Q = domain.center + uH * r_arc;
  if ((P - T).norm() > 1e-9 * r_arc) pts.push_back(P);
  // great-circle arc from uT to uH on the clearance sphere
  double ca = std::clamp(dot(uT, uH), -1.0, 1.0);
  Vec3 axv = cross(uT, uH);
  double sa = axv.norm();
  double ang = std::atan2(sa, ca);
  if (ang > 1e-9) {
    Vec3 axis = sa > 1e-12 ? axv / sa : any_orthogonal(uT);
    if (sa <= 1e-12) ang = M_PI;  // antipodal: pick any meridian
    int narc = std::max(2, int(std::ceil(ang * r_arc / clearance)));
    for (int i = 1; i < narc; ++i) {
      Vec3 u = rotate_about(uT, axis, ang * i / narc);
      pts.push_back(domain.center + u * r_arc);
    }
  }
  if ((Q - H).norm() > 1e-9 * r_arc) pts.push_back(Q);
  return make_poly_curve(std::move(pts), true);
}

ScalarField curve_distance_field(const Grid& g, const PolyCurve& curve,
                                 Placement placement) {
  if (placement != Placement::Cell && placement != Placement::Node)
    throw ConfigError("curve_distance_field: cell or node placement only");
  SegmentBVH bvh(curve);
  ScalarField out(g, placement, "curve_dist");
  Dims3 d = out.dims();
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        Vec3 p = placement == Placement::Cell ? g.cell_center(i, j, k)
                                              : g.node_pos(i, j, k);
        out.v[d.lin(i, j, k)] = bvh.distance(p);
      }
  return out;
}

PolyCurve read_curve_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open curve file: " + path);
  bool closed = false;
  std::vector<Vec3> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("closed=");
      if (pos != std::string::npos) closed = line[pos + 7] == '1';
      continue;
    }
    std::istringstream ss(line);
    std::string tok;
    double vals[4];
    int nv = 0;
    bool numeric = true;
    while (nv < 4 && std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        vals[nv] = std::stod(tok, &used);
        if (used == 0) numeric = false;
      } catch (...) {
        numeric = false;
      }
      if (!numeric) break;
      ++nv;
    }
    if (!numeric || nv < 4) continue;  // header or malformed row
    pts.push_back({vals[1], vals[2], vals[3]});
  }
  if (pts.size() < 2) throw ConfigError("curve file has fewer than 2 vertices");
  return make_poly_curve(std::move(pts), closed);
}

void write_curve_csv(const std::string& path, const PolyCurve& c) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write curve file: " + path);
  os << "# closed=" << (c.closed ? 1 : 0) << "\n";
  os << "s,x,y,z\n";
  os.precision(17);
  for (size_t i = 0; i < c.pts.size(); ++i)
    os << c.s[i] << ',' << c.pts[i].x << ',' << c.pts[i].y << ',' << c.pts[i].z
       << '\n';
}

void write_curve_csv(const std::string& path, const FramedCurve& fc) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write curve file: " + path);
  const PolyCurve& c = fc.curve;
  os << "# closed=" << (c.closed ? 1 : 0) << "\n";
  os << "s,x,y,z,tx,ty,tz,e1x,e1y,e1z,e2x,e2y,e2z\n";
  os.precision(17);
  for (size_t i = 0; i < c.pts.size(); ++i) {
    os << c.s[i] << ',' << c.pts[i].x << ',' << c.pts[i].y << ',' << c.pts[i].z;
    os << ',' << fc.tangent[i].x << ',' << fc.tangent[i].y << ','
       << fc.tangent[i].z;
    os << ',' << fc.e1[i].x << ',' << fc.e1[i].y << ',' << fc.e1[i].z;
    os << ',' << fc.e2[i].x << ',' << fc.e2[i].y << ',' << fc.e2[i].z << '\n';
  }
}

}  // namespace glpin
