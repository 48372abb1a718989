#include <cmath>
#include <vector>

#include "doctest.h"
#include "glpin/biot_savart.hpp"
#include "glpin/curve.hpp"
#include "glpin/domain.hpp"
#include "glpin/ops.hpp"
#include "glpin/solvers.hpp"
#include "glpin/util.hpp"

using namespace glpin;

namespace {

PolyCurve xy_circle(double radius, int n) {
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) {
    double t = 2 * M_PI * i / n;
    pts.push_back({radius * std::cos(t), radius * std::sin(t), 0});
  }
  return make_poly_curve(std::move(pts), true);
}

// independent check value: 32 point Gauss quadrature of the segment integrand
Vec3 segment_quadrature(Vec3 p, Vec3 a, Vec3 b) {
  static const double gx[] = {0.0483076656877383, 0.1444719615827965,
                              0.2392873622521371, 0.3318686022821277,
                              0.4213512761306353, 0.5068999089322294,
                              0.5877157572407623, 0.6630442669302152,
                              0.7321821187402897, 0.7944837959679424,
                              0.8493676137325700, 0.8963211557660521,
                              0.9349060759377397, 0.9647622555875064,
                              0.9856115115452684, 0.9972638618494816};
  static const double gw[] = {0.0965400885147278, 0.0956387200792749,
                              0.0938443990808046, 0.0911738786957639,
                              0.0876520930044038, 0.0833119242269467,
                              0.0781938957870703, 0.0723457941088485,
                              0.0658222227763618, 0.0586840934785355,
                              0.0509980592623762, 0.0428358980222267,
                              0.0342738629130214, 0.0253920653092621,
                              0.0162743947309057, 0.0070186100094701};
  Vec3 u = b - a;
  Vec3 acc{0, 0, 0};
  for (int i = 0; i < 16; ++i)
    for (double sgn : {-1.0, 1.0}) {
      double s = 0.5 + sgn * 0.5 * gx[i];
      Vec3 q = a + u * s;
      Vec3 r = q - p;
      acc = acc + cross(r, u) * (0.5 * gw[i] * 0.5 / std::pow(r.norm(), 3));
    }
  return acc;
}

double loop_circulation(const FramedCurve& fc, Vec3 center, Vec3 e1, Vec3 e2,
                        double radius, int n = 1200) {
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    double t = 2 * M_PI * (i + 0.5) / n;
    Vec3 p = center + (e1 * std::cos(t) + e2 * std::sin(t)) * radius;
    Vec3 tang = (e2 * std::cos(t) - e1 * std::sin(t)) * radius;
    acc += dot(eval_X(p, fc), tang) * (2 * M_PI / n);
  }
  return acc;
}

}  // namespace

TEST_CASE("segment field matches quadrature and flips with orientation") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    Vec3 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec3 b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec3 mid = (a + b) * 0.5;
    if ((p - mid).norm() < 0.3) continue;
    Vec3 exact = segment_field(p, a, b);
    Vec3 quad = segment_quadrature(p, a, b);
    CHECK((exact - quad).norm() <= 1e-9 * (1 + exact.norm()));
    Vec3 flipped = segment_field(p, b, a);
    CHECK((exact + flipped).norm() <= 1e-14 * (1 + exact.norm()));
  }
}

TEST_CASE("segment field: long straight wire gives the 1/r law") {
  Vec3 a{0, 0, -4000}, b{0, 0, 4000};
  for (double r : {0.5, 1.0, 2.0}) {
    Vec3 x = segment_field({r, 0, 0}, a, b);
    CHECK(x.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(x.z == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(x.y == doctest::Approx(1.0 / r).epsilon(1e-5));
  }
  // on the bisector plane the axial component vanishes
  Vec3 x = segment_field({0.3, 0.4, 0}, {0, 0, -1}, {0, 0, 1});
  CHECK(x.z == doctest::Approx(0.0));
  CHECK_THROWS_AS(segment_field({0, 0, 0.2}, {0, 0, -1}, {0, 0, 1}),
                  GeometryError);
}

TEST_CASE("circle field: center value, circulation, far decay") {
  FramedCurve fc = build_frame(xy_circle(1.0, 1024));
  Vec3 c = eval_X({0, 0, 0}, fc);
  CHECK(c.x == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(c.y == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(c.z == doctest::Approx(M_PI).epsilon(1e-4));

  // square loop around the strand at (1,0,0), lying in the x z plane
  double side = 0.4;
  int m = 500;
  double circ = 0;
  Vec3 corners[4] = {{1 - side / 2, 0, -side / 2},
                     {1 + side / 2, 0, -side / 2},
                     {1 + side / 2, 0, side / 2},
                     {1 - side / 2, 0, side / 2}};
  for (int e = 0; e < 4; ++e) {
    Vec3 p0 = corners[e], p1 = corners[(e + 1) % 4];
    for (int i = 0; i < m; ++i) {
      Vec3 p = p0 + (p1 - p0) * ((i + 0.5) / m);
      circ += dot(eval_X(p, fc), (p1 - p0) * (1.0 / m));
    }
  }
  CHECK(circ == doctest::Approx(-2 * M_PI).epsilon(0.01));

  double f10 = eval_X({0, 0, 10}, fc).norm();
  double f20 = eval_X({0, 0, 20}, fc).norm();
  CHECK(f10 / f20 == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("linking number quantization over random loops") {
  FramedCurve fc = build_frame(xy_circle(1.0, 512));
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    bool link = trial % 2 == 0;
    double s = rng.uniform(0, fc.curve.total_length());
    Vec3 q = fc.curve.point_at(s);
    Vec3 tan = fc.curve.tangent_at(s).normalized();
    Vec3 e1 = any_orthogonal(tan).normalized();
    Vec3 e2 = cross(tan, e1);
    double radius = rng.uniform(0.1, 0.3);
    Vec3 center = link ? q : q + e1 * 2.5;
    double circ = loop_circulation(fc, center, e1, e2, radius);
    double expect = link ? 2 * M_PI : 0.0;
    CHECK(std::abs(std::abs(circ) - expect) < 0.02 * 2 * M_PI);
  }
}

TEST_CASE("near split: osculating magnitude and subordinate remainder") {
  FramedCurve circle = build_frame(xy_circle(1.0, 2048));
  Tube tube = make_tube(circle, 0.5);

  Vec3 p{1.0 - 0.01, 0, 0};
  NearSplit ns = near_split(p, tube);
  CHECK(ns.Y.norm() == doctest::Approx(100.0).epsilon(0.005));

  // the remainder loses ground against 1/r as the point approaches the core
  double prev_ratio = -1;
  for (double d : {0.1, 0.02, 0.01}) {
    NearSplit s = near_split({1.0 - d, 0, 0}, tube);
    CHECK(s.Y.norm() == doctest::Approx(1.0 / d).epsilon(0.01));
    double ratio = s.h.norm() / s.Y.norm();
    if (prev_ratio > 0) CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
    CHECK(s.h.norm() < 12.0);
  }
  CHECK_THROWS_AS(near_split({0, 0, 0}, tube), GeometryError);

  // huge circle locally looks straight: remainder tiny against the 1/r part;
  // probe opposite a segment midpoint to stay clear of polygon corners
  FramedCurve big = build_frame(xy_circle(1000.0, 4096));
  Tube bigtube = make_tube(big, 1.0);
  double th = M_PI / 4096;
  Vec3 mid{1000.0 * std::cos(th) * std::cos(th),
           1000.0 * std::cos(th) * std::sin(th), 0};
  Vec3 inward = mid * (-1.0 / mid.norm());
  NearSplit far = near_split(mid + inward * 0.1, bigtube);
  CHECK(far.Y.norm() == doctest::Approx(10.0).epsilon(0.01));
  CHECK(far.h.norm() < 0.05 * far.Y.norm());
}

TEST_CASE("corrected fields: representation, divergence, flux, circulation") {
  Grid g = make_grid({0, 0, 0}, 1.0, 1.0 / 12, 6);
  Domain dom = make_ball_domain({0, 0, 0}, 1.0, g);
  FramedCurve fc = build_frame(xy_circle(0.55, 192));
  CorrectedFields cf = solve_jA(fc, dom, g);
  CutCellWeights w = make_weights(g, dom);

  // representation j = X + grad f - A, exact on the active edges
  BiotSavartField bs(fc);
  const VectorField& X = bs.sample_edges(g);
  VectorField df = gradient(cf.f);
  double maxj = 0;
  for (int c = 0; c < 3; ++c)
    for (double v : cf.j.comp[c]) maxj = std::max(maxj, std::abs(v));
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < cf.j.comp[c].size(); ++i)
      if (w.edge_w.comp[c][i] > 0) {
        double resid = cf.j.comp[c][i] - X.comp[c][i] - df.comp[c][i] +
                       cf.A.comp[c][i];
        CHECK(std::abs(resid) <= 1e-12 * (1 + maxj));
      }

  // weighted discrete divergence of j vanishes to solver tolerance
  VectorField wj = cf.j;
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < wj.comp[c].size(); ++i)
      wj.comp[c][i] *= w.edge_w.comp[c][i];
  ScalarField divj = grad_transpose(wj);
  double dscale = maxj * g.h * g.h;  // edge weight ~ h^3, gradient ~ 1/h
  for (double v : divj.v) CHECK(std::abs(v) <= 1e-6 * dscale);

  CHECK(cf.compat_defect <= 1e-10 * dscale);
  CHECK(cf.flux_residual <= 1e-2 * maxj);

  // grid loop around the strand: circulation of j + A recovers the winding;
  // traversal below is clockwise seen from +y, so the strand (oriented +y
  // at its piercing point) counts negative
  double circ = 0;
  {
    int m = 3;  // half side in cells, keeps the loop inside the ball
    Dims3 nd = g.nodes();
    int ic = int(std::round((0.55 - g.origin.x) / g.h));
    int jc = int(std::round((0.0 - g.origin.y) / g.h));
    int kc = int(std::round((0.0 - g.origin.z) / g.h));
    (void)nd;
    Dims3 ex = g.edges(0), ez = g.edges(2);
    for (int i = ic - m; i < ic + m; ++i)
      circ += (cf.j.comp[0][ex.lin(i, jc, kc - m)] +
               cf.A.comp[0][ex.lin(i, jc, kc - m)]) *
              g.h;
    for (int k = kc - m; k < kc + m; ++k)
      circ += (cf.j.comp[2][ez.lin(ic + m, jc, k)] +
               cf.A.comp[2][ez.lin(ic + m, jc, k)]) *
              g.h;
    for (int i = ic + m; i > ic - m; --i)
      circ -= (cf.j.comp[0][ex.lin(i - 1, jc, kc + m)] +
               cf.A.comp[0][ex.lin(i - 1, jc, kc + m)]) *
              g.h;
    for (int k = kc + m; k > kc - m; --k)
      circ -= (cf.j.comp[2][ez.lin(ic - m, jc, k - 1)] +
               cf.A.comp[2][ez.lin(ic - m, jc, k - 1)]) *
              g.h;
  }
  CHECK(circ == doctest::Approx(-2 * M_PI).epsilon(0.02));
}

TEST_CASE("corrected fields ignore the outside extension") {
  Grid g = make_grid({0, 0, 0}, 1.0, 1.0 / 12, 6);
  Domain dom = make_ball_domain({0, 0, 0}, 1.0, g);

  // open arc inside the ball, closed off two different ways outside
  auto make_arc = [&]() {
    std::vector<Vec3> pts;
    for (int i = 0; i <= 120; ++i) {
      double t = -1.1 + 2.2 * i / 120;
      pts.push_back({t, 0.25 * (1 - t * t), 0});
    }
    return make_poly_curve(std::move(pts), false);
  };
  PolyCurve a = extend_and_close(make_arc(), dom, 0.8, 0.4);
  PolyCurve b0 = extend_and_close(make_arc(), dom, 1.6, 0.9);
  CorrectedFields ca = solve_jA(build_frame(a), dom, g);
  CorrectedFields cb = solve_jA(build_frame(b0), dom, g);

  CutCellWeights w = make_weights(g, dom);
  double num = 0, den = 0;
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < ca.j.comp[c].size(); ++i) {
      double d = ca.j.comp[c][i] - cb.j.comp[c][i];
      num += w.edge_w.comp[c][i] * d * d;
      den += w.edge_w.comp[c][i] * ca.j.comp[c][i] * ca.j.comp[c][i];
    }
  CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("curve outside the domain leaves no vorticity inside") {
  Grid g = make_grid({0, 0, 0}, 0.8, 0.8 / 10, 6);
  Domain dom = make_ball_domain({0, 0, 0}, 0.8, g);
  // circle far outside the ball
  std::vector<Vec3> pts;
  for (int i = 0; i < 128; ++i) {
    double t = 2 * M_PI * i / 128;
    pts.push_back({3.0 + 0.8 * std::cos(t), 0.8 * std::sin(t), 0});
  }
  FramedCurve fc = build_frame(make_poly_curve(std::move(pts), true));
  CorrectedFields cf = solve_jA(fc, dom, g);

  double maxX = 0;
  BiotSavartField bs(fc);
  const VectorField& X = bs.sample_edges(g);
  for (int c = 0; c < 3; ++c)
    for (double v : X.comp[c]) maxX = std::max(maxX, std::abs(v));

  // circulation of j + A around interior plaquette loops stays near zero
  Dims3 ex = g.edges(0), ez = g.edges(2);
  int ic = g.n.nx / 2, jc = g.n.ny / 2, kc = g.n.nz / 2;
  int m = 3;
  double circ = 0;
  for (int i = ic - m; i < ic + m; ++i)
    circ += (cf.j.comp[0][ex.lin(i, jc, kc - m)] +
             cf.A.comp[0][ex.lin(i, jc, kc - m)]) *
            g.h;
  for (int k = kc - m; k < kc + m; ++k)
    circ += (cf.j.comp[2][ez.lin(ic + m, jc, k)] +
             cf.A.comp[2][ez.lin(ic + m, jc, k)]) *
            g.h;
  for (int i = ic + m; i > ic - m; --i)
    circ -= (cf.j.comp[0][ex.lin(i - 1, jc, kc + m)] +
             cf.A.comp[0][ex.lin(i - 1, jc, kc + m)]) *
            g.h;
  for (int k = kc + m; k > kc - m; --k)
    circ -= (cf.j.comp[2][ez.lin(ic - m, jc, k - 1)] +
             cf.A.comp[2][ez.lin(ic - m, jc, k - 1)]) *
            g.h;
  CHECK(std::abs(circ) < 1e-3 * maxX * (8 * m * g.h) + 1e-10);
}

TEST_CASE("renormalized constant: settling bracket and self convergence") {
  FramedCurve fc = build_frame(xy_circle(0.55, 192));
  std::vector<double> radii = {0.40, 0.32, 0.25};

  Grid gc = make_grid({0, 0, 0}, 1.0, 1.0 / 12, 6);
  Domain domc = make_ball_domain({0, 0, 0}, 1.0, gc);
  CorrectedFields cfc = solve_jA(fc, domc, gc);
  RenormalizedConstant coarse = c_omega(fc, domc, cfc, radii);

  Grid gf = make_grid({0, 0, 0}, 1.0, 1.0 / 16, 6);
  Domain domf = make_ball_domain({0, 0, 0}, 1.0, gf);
  CorrectedFields cff = solve_jA(fc, domf, gf);
  RenormalizedConstant fine = c_omega(fc, domf, cff, radii);

  // bracket differences shrink with the radii
  double d1 = std::abs(fine.table[0].second - fine.table[1].second);
  double d2 = std::abs(fine.table[1].second - fine.table[2].second);
  CHECK(d2 < d1);

  CHECK(std::abs(fine.c - coarse.c) <
        0.05 * (std::abs(fine.c) + std::abs(coarse.c)));
  CHECK(fine.uncertainty < 0.1 * std::abs(fine.c) + 0.5);

  CHECK_THROWS_AS(c_omega(fc, domc, cfc, {0.2, 0.3}), ConfigError);
  CHECK_THROWS_AS(c_omega(fc, domc, cfc, {0.4}), ConfigError);
  CHECK_THROWS_AS(c_omega(fc, domc, cfc, {0.4, 1.0 / 8}), ConfigError);
}
