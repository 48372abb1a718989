#include "glpin/domain.hpp"

#include <algorithm>
#include <cmath>

namespace glpin {

Vec3 Domain::normal(Vec3 p) const {
  Vec3 r = p - center;
  double n = r.norm();
  if (n < 1e-14) return {1, 0, 0};
  return r / n;
}

Domain make_ball_domain(Vec3 center, double radius, const Grid& grid) {
  if (radius <= 0) throw ConfigError("ball radius must be positive");
  Vec3 lo = grid.box_min(), hi = grid.box_max();
  double margin = grid.pad * grid.h;
  for (int a = 0; a < 3; ++a) {
    if (center[a] - radius < lo[a] + margin || center[a] + radius > hi[a] - margin)
      throw ConfigError("ball with pad margin does not fit in grid");
  }
  return Domain{center, radius};
}

double plane_cell_fraction(double d_center, Vec3 grad_d, double h) {
  double b[3];
  int n = 0;
  double bmax = 0;
  for (int a = 0; a < 3; ++a) bmax = std::max(bmax, std::abs(grad_d[a]) * h / 2);
  for (int a = 0; a < 3; ++a) {
    double ba = std::abs(grad_d[a]) * h / 2;
    if (ba > 1e-9 * bmax && ba > 0) b[n++] = ba;
  }
  double t = -d_center;
  if (n == 0) return t > 0 ? 1.0 : (t < 0 ? 0.0 : 0.5);

  // Inside fraction of a linear function over a cube: n-th order inclusion-
  // exclusion of shifted powers, normalized by n! * prod(2 b_i).
  double s = t;
  double denom = 1;
  for (int i = 0; i < n; ++i) {
    s += b[i];
    denom *= 2 * b[i];
  }
  for (int i = 2; i <= n; ++i) denom *= i;
  auto pp = [n](double x) {
    if (x <= 0) return 0.0;
    double r = x;
    for (int i = 1; i < n; ++i) r *= x;
    return r;
  };
  double acc = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double arg = s;
    int bits = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) {
        arg -= 2 * b[i];
        ++bits;
      }
    acc += (bits % 2 ? -1.0 : 1.0) * pp(arg);
  }
  double f = acc / denom;
  return std::clamp(f, 0.0, 1.0);
}

ScalarField cell_fractions(const Grid& g, const Domain& dom) {
  ScalarField out(g, Placement::Cell, "omega_frac");
  Dims3 d = g.cells();
  const double half_diag = std::sqrt(3.0) / 2 * g.h;
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        Vec3 c = g.cell_center(i, j, k);
        double dc = dom.dist(c);
        double& f = out.v[d.lin(i, j, k)];
        if (dc <= -half_diag)
          f = 1;
        else if (dc >= half_diag)
          f = 0;
        else
          f = plane_cell_fraction(dc, dom.normal(c), g.h);
      }
  return out;
}

CutCellWeights make_weights(const Grid& g, const ScalarField& frac) {
  if (frac.placement != Placement::Cell)
    throw ConfigError("make_weights expects cell fractions");
  CutCellWeights w{frac, VectorField(g, Placement::Edge, "edge_w"),
                   ScalarField(g, Placement::Node, "node_w")};
  Dims3 dc = g.cells();
  const double vol = g.h * g.h * g.h;
  auto fr = [&](int i, int j, int k) -> double {
    if (i < 0 || j < 0 || k < 0 || i >= dc.nx || j >= dc.ny || k >= dc.nz)
      return 0;
    return frac.v[dc.lin(i, j, k)];
  };
  for (int a = 0; a < 3; ++a) {
    Dims3 de = g.edges(a);
    for (int k = 0; k < de.nz; ++k)
      for (int j = 0; j < de.ny; ++j)
        for (int i = 0; i < de.nx; ++i) {
          // the four cells sharing this edge: offsets in the two cross axes
          double acc = 0;
          for (int s = 0; s < 4; ++s) {
            int d1 = s & 1, d2 = (s >> 1) & 1;
            int ci = i, cj = j, ck = k;
            if (a == 0) {
              cj = j - d1;
              ck = k - d2;
            } else if (a == 1) {
              ci = i - d1;
              ck = k - d2;
            } else {
              ci = i - d1;
              cj = j - d2;
            }
            acc += fr(ci, cj, ck);
          }
          w.edge_w.comp[a][de.lin(i, j, k)] = acc * vol / 4;
        }
  }
  Dims3 dn = g.nodes();
  for (int k = 0; k < dn.nz; ++k)
    for (int j = 0; j < dn.ny; ++j)
      for (int i = 0; i < dn.nx; ++i) {
        double acc = 0;
        for (int s = 0; s < 8; ++s)
          acc += fr(i - (s & 1), j - ((s >> 1) & 1), k - ((s >> 2) & 1));
        w.node_w.v[dn.lin(i, j, k)] = acc * vol / 8;
      }
  return w;
}

CutCellWeights make_weights(const Grid& g, const Domain& dom) {
  return make_weights(g, cell_fractions(g, dom));
}

double integrate(const ScalarField& f, const RegionSpec& region) {
  const Grid& g = f.grid;
  if ((region.kind == Region::Omega || region.kind == Region::Tube ||
       region.kind == Region::OmegaMinusTube) &&
      region.domain == nullptr)
    throw ConfigError("integrate: region needs a domain");
  if ((region.kind == Region::Tube || region.kind == Region::OmegaMinusTube) &&
      (region.curve_dist == nullptr ||
       region.curve_dist->placement != Placement::Cell))
    throw ConfigError("integrate: tube region needs cell curve distances");

  ScalarField frac(g, Placement::Cell);
  bool have_frac = false;
  if (region.kind != Region::Box) {
    frac = cell_fractions(g, *region.domain);
    have_frac = true;
  }

  Dims3 dc = g.cells();
  Dims3 dn = g.nodes();
  const bool node_field = f.placement == Placement::Node;
  if (!node_field && f.placement != Placement::Cell)
    throw ConfigError("integrate expects a node or cell scalar");
  const double vol = g.h * g.h * g.h;
  double acc = 0;
  for (int k = 0; k < dc.nz; ++k)
    for (int j = 0; j < dc.ny; ++j)
      for (int i = 0; i < dc.nx; ++i) {
        int64_t c = dc.lin(i, j, k);
        double w = have_frac ? frac.v[c] : 1.0;
        if (region.kind == Region::Tube || region.kind == Region::OmegaMinusTube) {
          double ind =
              tube_ramp(region.curve_dist->v[c], region.tube_radius, g.h);
          w *= region.kind == Region::Tube ? ind : 1 - ind;
        }
        if (w == 0) continue;
        double val;
        if (node_field) {
          double s = 0;
          for (int m = 0; m < 8; ++m)
            s += f.v[dn.lin(i + (m & 1), j + ((m >> 1) & 1), k + ((m >> 2) & 1))];
          val = s / 8;
        } else {
          val = f.v[c];
        }
        acc += w * val * vol;
      }
  return acc;
}

}  // namespace glpin
