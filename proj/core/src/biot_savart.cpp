#include "glpin/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "glpin/ops.hpp"
#include "glpin/solvers.hpp"
#include "glpin/util.hpp"

namespace glpin {

Vec3 segment_field(Vec3 p, Vec3 a, Vec3 b) {
  Vec3 u = b - a;
  Vec3 ra = a - p, rb = b - p;
  Vec3 cr = cross(ra, u);
  double cr2 = cr.norm2();
  double ulen = u.norm();
  if (ulen < 1e-300) return {0, 0, 0};
  double dperp = std::sqrt(cr2) / ulen;
  if (dperp < 1e-9) {
    // on the carrying line: either singular on the segment or a clean zero
    double s = -dot(ra, u) / (ulen * ulen);
    if (dperp < 1e-12 && s > -1e-9 && s < 1 + 1e-9)
      throw GeometryError("field evaluated on a current segment");
    return {0, 0, 0};
  }
  double bracket = dot(u, rb) / rb.norm() - dot(u, ra) / ra.norm();
  return cr * (0.5 * bracket / cr2);
}

Vec3 eval_X(Vec3 p, const FramedCurve& fc) {
  const PolyCurve& c = fc.curve;
  if (!c.closed)
    throw GeometryError("circulation field needs a closed curve");
  Vec3 acc{0, 0, 0};
  int ns = c.seg_count();
  for (int i = 0; i < ns; ++i) {
    Vec3 a, b;
    c.seg(i, a, b);
    acc = acc + segment_field(p, a, b);
  }
  return acc;
}

const VectorField& BiotSavartField::sample_edges(const Grid& g) {
  bool same = cached_ && cache_.grid.n.nx == g.n.nx &&
              cache_.grid.n.ny == g.n.ny && cache_.grid.n.nz == g.n.nz &&
              cache_.grid.h == g.h &&
              (cache_.grid.origin - g.origin).norm() == 0;
  if (!same) {
    cache_ = sample_vector(g, Placement::Edge,
                           [&](Vec3 p) { return eval_X(p, fc); });
    cached_ = true;
  }
  return cache_;
}

NearSplit near_split(Vec3 p, const Tube& tube) {
  int seg = 0;
  double t = 0;
  double d = tube.bvh.distance(p, &seg, &t);
  if (d >= tube.delta) throw GeometryError("point outside the tube");
  if (d < 1e-12) throw GeometryError("point on the curve core");
  const PolyCurve& c = tube.fc.curve;
  Vec3 a, b;
  c.seg(seg, a, b);
  double s = c.s[size_t(seg)] + t * (b - a).norm();
  Vec3 q = a + (b - a) * t;
  Vec3 tan = c.tangent_at(s).normalized();
  Vec3 rel = q - p;
  NearSplit out;
  out.Y = cross(rel * (1.0 / rel.norm2()), tan);
  out.h = eval_X(p, tube.fc) - out.Y;
  return out;
}

namespace {

// cell average of the axis component of an edge field, times cell fraction
ScalarField cell_source(const VectorField& j, const ScalarField& frac,
                        int axis) {
  const Grid& g = j.grid;
  ScalarField src(g, Placement::Cell);
  Dims3 cd = g.cells();
  Dims3 ed = g.edges(axis);
  for (int k = 0; k < cd.nz; ++k)
    for (int j2 = 0; j2 < cd.ny; ++j2)
      for (int i = 0; i < cd.nx; ++i) {
        // the four edges of this axis bounding the cell
        int i1 = i, j1 = j2, k1 = k;
        double acc = 0;
        if (axis == 0) {
          acc = j.comp[0][ed.lin(i1, j1, k1)] +
                j.comp[0][ed.lin(i1, j1 + 1, k1)] +
                j.comp[0][ed.lin(i1, j1, k1 + 1)] +
                j.comp[0][ed.lin(i1, j1 + 1, k1 + 1)];
        } else if (axis == 1) {
          acc = j.comp[1][ed.lin(i1, j1, k1)] +
                j.comp[1][ed.lin(i1 + 1, j1, k1)] +
                j.comp[1][ed.lin(i1, j1, k1 + 1)] +
                j.comp[1][ed.lin(i1 + 1, j1, k1 + 1)];
        } else {
          acc = j.comp[2][ed.lin(i1, j1, k1)] +
                j.comp[2][ed.lin(i1 + 1, j1, k1)] +
                j.comp[2][ed.lin(i1, j1 + 1, k1)] +
                j.comp[2][ed.lin(i1 + 1, j1 + 1, k1)];
        }
        src.v[cd.lin(i, j2, k)] = 0.25 * acc * frac.v[cd.lin(i, j2, k)];
      }
  return src;
}

double rel_change(const VectorField& a, const VectorField& b) {
  double num = 0, den = 0;
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < a.comp[c].size(); ++i) {
      double d = a.comp[c][i] - b.comp[c][i];
      num += d * d;
      den += b.comp[c][i] * b.comp[c][i];
    }
  return std::sqrt(num / std::max(den, 1e-300));
}

// Interpolation of an edge field that downweights barely covered cut
// edges, whose values the least squares never constrained. A plain
// renormalized average would lose linear exactness, so the stencil values
// are fitted by a weighted linear model and evaluated at the sample point.
double trilinear_conf(const std::vector<double>& arr,
                      const std::vector<double>& ew, double full_w, Dims3 d,
                      Vec3 frac) {
  auto prep = [](double u, int n, int& i0, double& t) {
    if (u < 0) u = 0;
    if (u > n - 1) u = n - 1;
    i0 = std::min(int(u), n - 2 < 0 ? 0 : n - 2);
    t = u - i0;
  };
  int i0, j0, k0;
  double tx, ty, tz;
  prep(frac.x, d.nx, i0, tx);
  prep(frac.y, d.ny, j0, ty);
  prep(frac.z, d.nz, k0, tz);
  // normal equations for v ~ c0 + c1 dx + c2 dy + c3 dz around the sample
  double M[4][4] = {};
  double rhs4[4] = {};
  double wsum = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        double cw = (a ? tx : 1 - tx) * (b ? ty : 1 - ty) * (c ? tz : 1 - tz);
        size_t idx = d.lin(std::min(i0 + a, d.nx - 1),
                           std::min(j0 + b, d.ny - 1),
                           std::min(k0 + c, d.nz - 1));
        double wt = (0.05 + cw) * std::min(ew[idx] / full_w, 1.0);
        double bx[4] = {1, a - tx, b - ty, c - tz};
        for (int r = 0; r < 4; ++r) {
          for (int s = 0; s < 4; ++s) M[r][s] += wt * bx[r] * bx[s];
          rhs4[r] += wt * bx[r] * arr[idx];
        }
        wsum += wt;
      }
  if (wsum <= 1e-14) return 0.0;
  // shrink undetermined slopes instead of failing on degenerate stencils
  for (int r = 1; r < 4; ++r) M[r][r] += 1e-9 * wsum;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-30) return rhs4[0] / wsum;
    std::swap(M[col], M[piv]);
    std::swap(rhs4[col], rhs4[piv]);
    for (int r = col + 1; r < 4; ++r) {
      double fac = M[r][col] / M[col][col];
      for (int s = col; s < 4; ++s) M[r][s] -= fac * M[col][s];
      rhs4[r] -= fac * rhs4[col];
    }
  }
  double sol[4];
  for (int r = 3; r >= 0; --r) {
    double acc = rhs4[r];
    for (int s = r + 1; s < 4; ++s) acc -= M[r][s] * sol[s];
    sol[r] = acc / M[r][r];
  }
  return sol[0];
}

Vec3 interp_conf(const VectorField& f, const VectorField& edge_w, double h3,
                 Vec3 p) {
  const Grid& g = f.grid;
  Vec3 out;
  for (int a = 0; a < 3; ++a) {
    Vec3 u = (p - g.origin) / g.h;
    u[a] -= 0.5;
    out[a] = trilinear_conf(f.comp[a], edge_w.comp[a], h3, f.dims(a), u);
  }
  return out;
}

}  // namespace

CorrectedFields solve_jA(const FramedCurve& fc, const Domain& dom,
                         const Grid& g, int boundary_stride) {
  CutCellWeights w = make_weights(g, dom);
  BiotSavartField bs(fc);
  const VectorField& X = bs.sample_edges(g);

  CorrectedFields out;
  out.A = VectorField(g, Placement::Edge);
  out.j = VectorField(g, Placement::Edge);
  std::vector<double> history;
  VectorField rhs(g, Placement::Edge);

  for (int it = 0; it < 40; ++it) {
    for (int c = 0; c < 3; ++c)
      for (size_t i = 0; i < rhs.comp[c].size(); ++i)
        rhs.comp[c][i] = out.A.comp[c][i] - X.comp[c][i];
    out.f = project_gradient(w.edge_w, rhs, nullptr, 1e-10, 6000);
    VectorField df = gradient(out.f);
    for (int c = 0; c < 3; ++c)
      for (size_t i = 0; i < out.j.comp[c].size(); ++i)
        out.j.comp[c][i] = w.edge_w.comp[c][i] > 0
                               ? X.comp[c][i] + df.comp[c][i] -
                                     out.A.comp[c][i]
                               : 0.0;

    VectorField Anew(g, Placement::Edge);
    for (int c = 0; c < 3; ++c) {
      ScalarField src = cell_source(out.j, w.frac, c);
      ScalarField u = solve_free_space_poisson(src, boundary_stride, nullptr,
                                               1e-10, 6000);
      Dims3 ed = g.edges(c);
      for (int kk = 0; kk < ed.nz; ++kk)
        for (int jj = 0; jj < ed.ny; ++jj)
          for (int ii = 0; ii < ed.nx; ++ii)
            Anew.comp[c][ed.lin(ii, jj, kk)] =
                interp(u, g.edge_mid(c, ii, jj, kk));
    }
    double ch = rel_change(Anew, out.A);
    out.A = Anew;
    out.iterations = it + 1;
    history.push_back(ch);
    if (ch < 1e-8) break;
    if (history.size() >= 4 && ch > 0.9 * history[history.size() - 2] &&
        ch > 1e-5) {
      std::ostringstream msg;
      msg << "corrected-field iteration not contracting:";
      for (double v : history) msg << " " << v;
      throw SolverError(msg.str());
    }
  }
  if (history.empty() || history.back() >= 1e-6)
    throw SolverError("corrected-field iteration ran out of sweeps");

  // final consistency pass so the representation holds for the returned A
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < rhs.comp[c].size(); ++i)
      rhs.comp[c][i] = out.A.comp[c][i] - X.comp[c][i];
  out.f = project_gradient(w.edge_w, rhs, nullptr, 1e-10, 6000);
  VectorField df = gradient(out.f);
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < out.j.comp[c].size(); ++i)
      out.j.comp[c][i] =
          w.edge_w.comp[c][i] > 0
              ? X.comp[c][i] + df.comp[c][i] - out.A.comp[c][i]
              : 0.0;

  // compatibility of the projection data: exact zero by summation by parts
  VectorField wrhs = rhs;
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < wrhs.comp[c].size(); ++i)
      wrhs.comp[c][i] *= w.edge_w.comp[c][i];
  ScalarField div_data = grad_transpose(wrhs);
  double defect = 0;
  for (size_t i = 0; i < div_data.v.size(); ++i) defect += div_data.v[i];
  out.compat_defect = std::abs(defect);

  // normal flux at the boundary, evaluated through the representation
  // j = X + grad f - A so the singular part enters analytically. grad f is
  // read with confidence-renormalized interpolation (barely weighted cut
  // edges carry wild values the least squares never constrained), and each
  // ray is extrapolated linearly to depth zero to remove the interior drift
  // of nu.j, which is legitimately nonzero away from the surface.
  VectorField df_final = gradient(out.f);
  double h3 = g.h * g.h * g.h;
  auto normal_j = [&](Vec3 nu, double depth) {
    Vec3 p = dom.center + nu * (dom.radius - depth * g.h);
    Vec3 jv = eval_X(p, fc) + interp_conf(df_final, w.edge_w, h3, p) -
              interp(out.A, p);
    return dot(jv, nu);
  };
  double flux = 0;
  Rng rng(4321);
  for (int k = 0; k < 600; ++k) {
    Vec3 nu = rng.unit_vector();
    double v1 = normal_j(nu, 0.5);
    double v2 = normal_j(nu, 1.0);
    flux = std::max(flux, std::abs(2 * v1 - v2));
  }
  out.flux_residual = flux;
  return out;
}

RenormalizedConstant c_omega(const FramedCurve& fc, const Domain& dom,
                             const CorrectedFields& fields,
                             const std::vector<double>& tube_radii) {
  const Grid& g = fields.j.grid;
  if (tube_radii.size() < 2)
    throw ConfigError("tube radius list needs at least two entries");
  for (size_t k = 0; k + 1 < tube_radii.size(); ++k)
    if (tube_radii[k] <= tube_radii[k + 1])
      throw ConfigError("tube radii must decrease");
  if (tube_radii.back() < 3 * g.h)
    throw ConfigError("smallest tube radius under three cells");

  // magnetic part over the whole box; the tail beyond it decays fast
  VectorField curlA = curl_edge_to_face(fields.A);
  double h3 = g.h * g.h * g.h;
  double term1 = 0;
  for (int c = 0; c < 3; ++c)
    for (double v : curlA.comp[c]) term1 += 0.5 * v * v * h3;

  ScalarField frac = cell_fractions(g, dom);
  ScalarField dist = curve_distance_field(g, fc.curve, Placement::Cell);
  double len = length_inside(fc.curve, dom);

  // per cell squared current, averaged over the four edges of each axis
  Dims3 cd = g.cells();
  ScalarField j2(g, Placement::Cell);
  for (int k = 0; k < cd.nz; ++k)
    for (int j = 0; j < cd.ny; ++j)
      for (int i = 0; i < cd.nx; ++i) {
        double acc = 0;
        for (int axis = 0; axis < 3; ++axis) {
          Dims3 ed = g.edges(axis);
          for (int b0 = 0; b0 < 2; ++b0)
            for (int b1 = 0; b1 < 2; ++b1) {
              int ii = i, jj = j, kk = k;
              if (axis == 0) {
                jj += b0;
                kk += b1;
              } else if (axis == 1) {
                ii += b0;
                kk += b1;
              } else {
                ii += b0;
                jj += b1;
              }
              double v = fields.j.comp[axis][ed.lin(ii, jj, kk)];
              acc += 0.25 * v * v;
            }
        }
        j2.v[cd.lin(i, j, k)] = acc;
      }

  RenormalizedConstant out;
  for (double rho : tube_radii) {
    double acc = 0;
    for (int k = 0; k < cd.nz; ++k)
      for (int j = 0; j < cd.ny; ++j)
        for (int i = 0; i < cd.nx; ++i) {
          size_t id = cd.lin(i, j, k);
          double outside = 1.0 - tube_ramp(dist.v[id], rho, g.h);
          acc += 0.5 * frac.v[id] * outside * j2.v[id] * h3;
        }
    out.table.push_back({rho, acc + M_PI * len * std::log(rho)});
  }

  for (size_t k = 0; k + 2 < out.table.size(); ++k) {
    double d1 = std::abs(out.table[k].second - out.table[k + 1].second);
    double d2 = std::abs(out.table[k + 1].second - out.table[k + 2].second);
    if (d2 > d1) {
      std::ostringstream msg;
      msg << "tube bracket not settling:";
      for (auto& [r, v] : out.table) msg << " (" << r << ", " << v << ")";
      throw SolverError(msg.str());
    }
  }

  // linear fit bracket = a + b rho, the remainder after the log cancels
  double n = double(out.table.size());
  double sr = 0, sv = 0, srr = 0, srv = 0;
  for (auto& [r, v] : out.table) {
    sr += r;
    sv += v;
    srr += r * r;
    srv += r * v;
  }
  double det = n * srr - sr * sr;
  double b = (n * srv - sr * sv) / det;
  double a = (sv - b * sr) / n;
  // compare with the line through the two smallest radii
  size_t m = out.table.size();
  double r1 = out.table[m - 2].first, v1 = out.table[m - 2].second;
  double r2 = out.table[m - 1].first, v2 = out.table[m - 1].second;
  double b2 = (v1 - v2) / (r1 - r2);
  double a2 = v2 - b2 * r2;
  out.c = term1 + a2;
  out.uncertainty = std::abs(a - a2);
  return out;
}

}  // namespace glpin
