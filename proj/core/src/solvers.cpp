#include "glpin/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "glpin/ops.hpp"

namespace glpin {

namespace {

double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void mask_zero(std::vector<double>& v, const std::vector<std::uint8_t>& m) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!m[i]) v[i] = 0;
}

void remove_mean_on(std::vector<double>& v,
                    const std::vector<std::uint8_t>* mask) {
  double s = 0;
  size_t n = 0;
  for (size_t i = 0; i < v.size(); ++i)
    if (!mask || (*mask)[i]) {
      s += v[i];
      ++n;
    }
  if (n == 0) return;
  double mean = s / double(n);
  for (size_t i = 0; i < v.size(); ++i)
    if (!mask || (*mask)[i]) v[i] -= mean;
}

}  // namespace

CGReport cg_solve(const ApplyFn& apply, const std::vector<double>& rhs,
                  std::vector<double>& x,
                  const std::vector<double>* jacobi_diag,
                  const std::vector<std::uint8_t>* mask, bool remove_mean,
                  double rel_tol, int max_iter) {
  const size_t n = rhs.size();
  if (x.size() != n) x.assign(n, 0.0);
  std::vector<double> r(n), z(n), p(n), Ap(n);

  apply(x, Ap);
  for (size_t i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];
  if (mask) mask_zero(r, *mask);
  if (remove_mean) remove_mean_on(r, mask);

  auto precond = [&](const std::vector<double>& rr, std::vector<double>& zz) {
    if (jacobi_diag) {
      for (size_t i = 0; i < n; ++i) {
        double d = (*jacobi_diag)[i];
        zz[i] = d > 0 ? rr[i] / d : rr[i];
      }
    } else {
      zz = rr;
    }
    if (mask) mask_zero(zz, *mask);
  };

  double rhs_norm = std::sqrt(dot_v(rhs, rhs));
  if (rhs_norm == 0) rhs_norm = 1;
  CGReport rep;
  double rnorm = std::sqrt(dot_v(r, r));
  rep.rel_residual = rnorm / rhs_norm;
  if (rep.rel_residual <= rel_tol) {
    rep.converged = true;
    return rep;
  }

  precond(r, z);
  p = z;
  double rz = dot_v(r, z);
  for (int it = 0; it < max_iter; ++it) {
    apply(p, Ap);
    if (mask) mask_zero(Ap, *mask);
    double pAp = dot_v(p, Ap);
    if (!(pAp > 0)) break;  // operator lost definiteness on this subspace
    double alpha = rz / pAp;
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    if (remove_mean) {
      remove_mean_on(r, mask);
      remove_mean_on(x, mask);
    }
    rep.iters = it + 1;
    rnorm = std::sqrt(dot_v(r, r));
    rep.rel_residual = rnorm / rhs_norm;
    if (rep.rel_residual <= rel_tol) {
      rep.converged = true;
      return rep;
    }
    precond(r, z);
    double rz_new = dot_v(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return rep;
}

ScalarField apply_weighted_laplacian(const VectorField& edge_w,
                                     const ScalarField& f) {
  VectorField g = gradient(f);
  for (int a = 0; a < 3; ++a)
    for (size_t i = 0; i < g.comp[a].size(); ++i)
      g.comp[a][i] *= edge_w.comp[a][i];
  return grad_transpose(g);
}

ScalarField project_gradient(const VectorField& edge_w, const VectorField& v,
                             CGReport* rep, double rel_tol, int max_iter) {
  const Grid& g = edge_w.grid;
  if (edge_w.placement != Placement::Edge || v.placement != Placement::Edge)
    throw ConfigError("project_gradient expects edge fields");

  VectorField wv(g, Placement::Edge);
  for (int a = 0; a < 3; ++a)
    for (size_t i = 0; i < wv.comp[a].size(); ++i)
      wv.comp[a][i] = edge_w.comp[a][i] * v.comp[a][i];
  ScalarField rhs = grad_transpose(wv);

  // Nodes touching at least one weighted edge take part; the rest stay 0.
  Dims3 dn = g.nodes();
  std::vector<std::uint8_t> mask(dn.count(), 0);
  std::vector<double> diag(dn.count(), 0.0);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int a = 0; a < 3; ++a) {
    Dims3 d = g.edges(a);
    int di = a == 0, dj = a == 1, dk = a == 2;
    for (int k = 0; k < d.nz; ++k)
      for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i) {
          double w = edge_w.comp[a][d.lin(i, j, k)];
          if (w <= 0) continue;
          diag[dn.lin(i, j, k)] += w * inv_h2;
          diag[dn.lin(i + di, j + dj, k + dk)] += w * inv_h2;
        }
  }
  for (size_t i = 0; i < mask.size(); ++i) mask[i] = diag[i] > 0;

  ScalarField f(g, Placement::Node, "potential");
  ApplyFn apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    ScalarField tmp(g, Placement::Node);
    tmp.v = in;
    out = apply_weighted_laplacian(edge_w, tmp).v;
  };
  CGReport r =
      cg_solve(apply, rhs.v, f.v, &diag, &mask, true, rel_tol, max_iter);
  if (rep) *rep = r;
  if (!r.converged)
    throw SolverError("project_gradient: CG stalled at rel residual " +
                      std::to_string(r.rel_residual));
  return f;
}

double newtonian_potential(const ScalarField& rhs_cells, Vec3 p) {
  const Grid& g = rhs_cells.grid;
  Dims3 dc = g.cells();
  const double cellvol = g.h * g.h * g.h;
  const double coef = cellvol / (4.0 * M_PI);
  double acc = 0;
  for (int k = 0; k < dc.nz; ++k)
    for (int j = 0; j < dc.ny; ++j)
      for (int i = 0; i < dc.nx; ++i) {
        double q = rhs_cells.v[dc.lin(i, j, k)];
        if (q == 0) continue;
        double r = (p - g.cell_center(i, j, k)).norm();
        if (r < 1e-12) continue;
        acc += coef * q / r;
      }
  return acc;
}

ScalarField solve_free_space_poisson(const ScalarField& rhs_cells,
                                     int boundary_stride, CGReport* rep,
                                     double rel_tol, int max_iter) {
  const Grid& g = rhs_cells.grid;
  if (rhs_cells.placement != Placement::Cell)
    throw ConfigError("solve_free_space_poisson expects a cell source");
  Dims3 dc = g.cells();
  if (dc.nx < 3 || dc.ny < 3 || dc.nz < 3)
    throw ConfigError("grid too small for a Dirichlet layer");

  struct Src {
    Vec3 p;
    double q;
  };
  std::vector<Src> srcs;
  for (int k = 0; k < dc.nz; ++k)
    for (int j = 0; j < dc.ny; ++j)
      for (int i = 0; i < dc.nx; ++i) {
        double q = rhs_cells.v[dc.lin(i, j, k)];
        if (q != 0) srcs.push_back({g.cell_center(i, j, k), q});
      }
  const double coef = g.h * g.h * g.h / (4.0 * M_PI);
  auto pot = [&](Vec3 p) {
    double acc = 0;
    for (const Src& s : srcs) {
      double r = (p - s.p).norm();
      if (r > 1e-12) acc += coef * s.q / r;
    }
    return acc;
  };

  ScalarField u(g, Placement::Cell, "potential");
  const int st = std::max(1, boundary_stride);

  // Dirichlet data: exact sums on a strided lattice of each box face,
  // bilinear in between.
  auto fill_face = [&](int axis, int side) {
    int n1 = axis == 0 ? dc.ny : dc.nx;
    int n2 = axis == 2 ? dc.ny : dc.nz;
    auto cell_of = [&](int a, int b) {
      int i, j, k;
      int fixed = side == 0 ? 0 : (axis == 0 ? dc.nx - 1
                                             : (axis == 1 ? dc.ny - 1 : dc.nz - 1));
      if (axis == 0) {
        i = fixed;
        j = a;
        k = b;
      } else if (axis == 1) {
        j = fixed;
        i = a;
        k = b;
      } else {
        k = fixed;
        i = a;
        j = b;
      }
      return std::array<int, 3>{i, j, k};
    };
    auto is_knot = [&](int a, int n) { return a % st == 0 || a == n - 1; };
    auto knot_below = [&](int a, int n) {
      int lo = (a / st) * st;
      int hi = std::min(lo + st, n - 1);
      return std::pair<int, int>{lo, hi};
    };
    std::vector<double> vals(size_t(n1) * size_t(n2),
                             std::numeric_limits<double>::quiet_NaN());
    for (int b = 0; b < n2; ++b)
      for (int a = 0; a < n1; ++a) {
        if (!is_knot(a, n1) || !is_knot(b, n2)) continue;
        auto c = cell_of(a, b);
        vals[size_t(b) * n1 + a] = pot(g.cell_center(c[0], c[1], c[2]));
      }
    for (int b = 0; b < n2; ++b)
      for (int a = 0; a < n1; ++a) {
        double val;
        if (is_knot(a, n1) && is_knot(b, n2)) {
          val = vals[size_t(b) * n1 + a];
        } else {
          auto [a0, a1] = knot_below(a, n1);
          auto [b0, b1] = knot_below(b, n2);
          double ta = a1 > a0 ? double(a - a0) / (a1 - a0) : 0;
          double tb = b1 > b0 ? double(b - b0) / (b1 - b0) : 0;
          double v00 = vals[size_t(b0) * n1 + a0];
          double v10 = vals[size_t(b0) * n1 + a1];
          double v01 = vals[size_t(b1) * n1 + a0];
          double v11 = vals[size_t(b1) * n1 + a1];
          val = (1 - tb) * ((1 - ta) * v00 + ta * v10) +
                tb * ((1 - ta) * v01 + ta * v11);
        }
        auto c = cell_of(a, b);
        u.v[dc.lin(c[0], c[1], c[2])] = val;
      }
  };
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) fill_face(axis, side);

  std::vector<std::uint8_t> interior(dc.count(), 0);
  for (int k = 1; k < dc.nz - 1; ++k)
    for (int j = 1; j < dc.ny - 1; ++j)
      for (int i = 1; i < dc.nx - 1; ++i) interior[dc.lin(i, j, k)] = 1;

  const double inv_h2 = 1.0 / (g.h * g.h);
  ApplyFn apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    out.assign(in.size(), 0.0);
    for (int k = 1; k < dc.nz - 1; ++k)
      for (int j = 1; j < dc.ny - 1; ++j)
        for (int i = 1; i < dc.nx - 1; ++i) {
          size_t c = dc.lin(i, j, k);
          out[c] = (6 * in[c] - in[dc.lin(i - 1, j, k)] - in[dc.lin(i + 1, j, k)] -
                    in[dc.lin(i, j - 1, k)] - in[dc.lin(i, j + 1, k)] -
                    in[dc.lin(i, j, k - 1)] - in[dc.lin(i, j, k + 1)]) * inv_h2;
        }
  };
  std::vector<double> diag(dc.count(), 6.0 * inv_h2);
  CGReport r = cg_solve(apply, rhs_cells.v, u.v, &diag, &interior, false,
                        rel_tol, max_iter);
  if (rep) *rep = r;
  if (!r.converged)
    throw SolverError("free-space Poisson: CG stalled at rel residual " +
                      std::to_string(r.rel_residual));
  return u;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1], Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(size_t(n));
  w.resize(size_t(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * z * p1 - k * p2) / (k + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[size_t(i)] = z;
    w[size_t(i)] = 2.0 / ((1 - z * z) * pp * pp);
  }
}

// Normalized associated Legendre values for fixed m, all l in [m, lmax]:
// out[l - m] = Pbar_l^m(x), with the normalization that makes
// Y_l0 = Pbar_l^0 and Y_lm = sqrt(2) Pbar_l^m cos/sin(m phi) orthonormal.
void legendre_row(int m, int lmax, double x, double sth,
                  std::vector<double>& out) {
  out.assign(size_t(lmax - m + 1), 0.0);
  double pmm = std::sqrt(1.0 / (4 * M_PI));
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt((2 * k + 1.0) / (2.0 * k)) * sth;
  out[0] = pmm;
  if (lmax == m) return;
  double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
  out[1] = pm1;
  for (int l = m + 2; l <= lmax; ++l) {
    double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
    double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                         (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
    double pl = a * (x * pm1 - b * pmm);
    out[size_t(l - m)] = pl;
    pmm = pm1;
    pm1 = pl;
  }
}

// packed offset of the (l, m=0) entry; per l the layout is m=0 then
// (cos, sin) pairs for m = 1..l, starting at l = 1
size_t coef_base(int l) { return size_t(l) * l - 1; }

}  // namespace

double BallHarmonics::eval(Vec3 p) const {
  Vec3 rel = p - center;
  double r = rel.norm();
  if (r < 1e-300) return 0;
  double x = rel.z / r;
  x = std::clamp(x, -1.0, 1.0);
  double sth = std::sqrt(std::max(0.0, 1 - x * x));
  double phi = std::atan2(rel.y, rel.x);
  std::vector<double> rl(size_t(lmax) + 1, 1.0);
  for (int l = 1; l <= lmax; ++l) rl[size_t(l)] = rl[size_t(l) - 1] * (r / radius);
  std::vector<double> pl;
  double acc = 0;
  for (int m = 0; m <= lmax; ++m) {
    legendre_row(m, lmax, x, sth, pl);
    double cm = std::cos(m * phi), sm = std::sin(m * phi);
    for (int l = std::max(m, 1); l <= lmax; ++l) {
      double P = pl[size_t(l - m)] * rl[size_t(l)];
      size_t base = coef_base(l);
      if (m == 0) {
        acc += coef[base] * P;
      } else {
        double rt2 = std::sqrt(2.0);
        acc += rt2 * P *
               (coef[base + 2 * size_t(m) - 1] * cm +
                coef[base + 2 * size_t(m)] * sm);
      }
    }
  }
  return acc;
}

BallHarmonics solve_ball_neumann(Vec3 center, double radius,
                                 const std::function<double(Vec3)>& data,
                                 int lmax, double* data_mean) {
  if (lmax < 1 || lmax > 200) throw ConfigError("harmonic degree out of range");
  if (radius <= 0) throw ConfigError("ball radius must be positive");
  BallHarmonics bh;
  bh.center = center;
  bh.radius = radius;
  bh.lmax = lmax;
  bh.coef.assign(size_t(lmax) * (size_t(lmax) + 2), 0.0);

  int nth = lmax + 1;
  int nph = 2 * lmax + 1;
  std::vector<double> gx, gw;
  gauss_legendre(nth, gx, gw);

  double mean_acc = 0;
  std::vector<double> gcos(size_t(lmax) + 1), gsin(size_t(lmax) + 1);
  std::vector<double> pl;
  for (int q = 0; q < nth; ++q) {
    double x = gx[size_t(q)];
    double sth = std::sqrt(std::max(0.0, 1 - x * x));
    // longitude moments of the data on this latitude ring
    for (int m = 0; m <= lmax; ++m) {
      gcos[size_t(m)] = 0;
      gsin[size_t(m)] = 0;
    }
    for (int j = 0; j < nph; ++j) {
      double phi = 2 * M_PI * j / nph;
      Vec3 nu{sth * std::cos(phi), sth * std::sin(phi), x};
      double g = data(center + nu * radius);
      for (int m = 0; m <= lmax; ++m) {
        gcos[size_t(m)] += g * std::cos(m * phi);
        gsin[size_t(m)] += g * std::sin(m * phi);
      }
    }
    double wring = gw[size_t(q)] * (2 * M_PI / nph);
    mean_acc += wring * gcos[0];
    for (int m = 0; m <= lmax; ++m) {
      legendre_row(m, lmax, x, sth, pl);
      for (int l = std::max(m, 1); l <= lmax; ++l) {
        double P = pl[size_t(l - m)];
        size_t base = coef_base(l);
        // c_lm = R/l * <data, Y_lm>
        double fac = wring * P * radius / l;
        if (m == 0) {
          bh.coef[base] += fac * gcos[0];
        } else {
          double rt2 = std::sqrt(2.0);
          bh.coef[base + 2 * size_t(m) - 1] += rt2 * fac * gcos[size_t(m)];
          bh.coef[base + 2 * size_t(m)] += rt2 * fac * gsin[size_t(m)];
        }
      }
    }
  }
  if (data_mean) *data_mean = mean_acc / (4 * M_PI);
  return bh;
}

}  // namespace glpin
