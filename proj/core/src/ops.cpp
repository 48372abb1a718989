#include "glpin/ops.hpp"

#include <algorithm>
#include <cmath>

namespace glpin {

VectorField gradient(const ScalarField& s) {
  if (s.placement != Placement::Node)
    throw ConfigError("gradient expects a node scalar");
  const Grid& g = s.grid;
  VectorField out(g, Placement::Edge, s.name.empty() ? "" : "grad_" + s.name);
  const double inv_h = 1.0 / g.h;
  for (int a = 0; a < 3; ++a) {
    Dims3 d = g.edges(a);
    int di = a == 0, dj = a == 1, dk = a == 2;
    for (int k = 0; k < d.nz; ++k)
      for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i)
          out.comp[a][d.lin(i, j, k)] =
              (s.at(i + di, j + dj, k + dk) - s.at(i, j, k)) * inv_h;
  }
  return out;
}

VectorField curl_edge_to_face(const VectorField& v) {
  if (v.placement != Placement::Edge)
    throw ConfigError("curl_edge_to_face expects an edge field");
  const Grid& g = v.grid;
  VectorField out(g, Placement::Face);
  const double inv_h = 1.0 / g.h;
  const auto& ex = v.comp[0];
  const auto& ey = v.comp[1];
  const auto& ez = v.comp[2];
  Dims3 dex = g.edges(0), dey = g.edges(1), dez = g.edges(2);

  Dims3 dfx = g.faces(0);
  for (int k = 0; k < dfx.nz; ++k)
    for (int j = 0; j < dfx.ny; ++j)
      for (int i = 0; i < dfx.nx; ++i)
        out.comp[0][dfx.lin(i, j, k)] =
            (ez[dez.lin(i, j + 1, k)] - ez[dez.lin(i, j, k)] -
             ey[dey.lin(i, j, k + 1)] + ey[dey.lin(i, j, k)]) * inv_h;
  Dims3 dfy = g.faces(1);
  for (int k = 0; k < dfy.nz; ++k)
    for (int j = 0; j < dfy.ny; ++j)
      for (int i = 0; i < dfy.nx; ++i)
        out.comp[1][dfy.lin(i, j, k)] =
            (ex[dex.lin(i, j, k + 1)] - ex[dex.lin(i, j, k)] -
             ez[dez.lin(i + 1, j, k)] + ez[dez.lin(i, j, k)]) * inv_h;
  Dims3 dfz = g.faces(2);
  for (int k = 0; k < dfz.nz; ++k)
    for (int j = 0; j < dfz.ny; ++j)
      for (int i = 0; i < dfz.nx; ++i)
        out.comp[2][dfz.lin(i, j, k)] =
            (ey[dey.lin(i + 1, j, k)] - ey[dey.lin(i, j, k)] -
             ex[dex.lin(i, j + 1, k)] + ex[dex.lin(i, j, k)]) * inv_h;
  return out;
}

ScalarField div_face_to_cell(const VectorField& v) {
  if (v.placement != Placement::Face)
    throw ConfigError("div_face_to_cell expects a face field");
  const Grid& g = v.grid;
  ScalarField out(g, Placement::Cell);
  const double inv_h = 1.0 / g.h;
  Dims3 dc = g.cells();
  Dims3 dfx = g.faces(0), dfy = g.faces(1), dfz = g.faces(2);
  for (int k = 0; k < dc.nz; ++k)
    for (int j = 0; j < dc.ny; ++j)
      for (int i = 0; i < dc.nx; ++i)
        out.v[dc.lin(i, j, k)] =
            (v.comp[0][dfx.lin(i + 1, j, k)] - v.comp[0][dfx.lin(i, j, k)] +
             v.comp[1][dfy.lin(i, j + 1, k)] - v.comp[1][dfy.lin(i, j, k)] +
             v.comp[2][dfz.lin(i, j, k + 1)] - v.comp[2][dfz.lin(i, j, k)]) * inv_h;
  return out;
}

VectorField curl_face_to_edge(const VectorField& v) {
  if (v.placement != Placement::Face)
    throw ConfigError("curl_face_to_edge expects a face field");
  const Grid& g = v.grid;
  VectorField out(g, Placement::Edge);
  const double inv_h = 1.0 / g.h;
  const auto& fx = v.comp[0];
  const auto& fy = v.comp[1];
  const auto& fz = v.comp[2];
  Dims3 dfx = g.faces(0), dfy = g.faces(1), dfz = g.faces(2);

  Dims3 dex = g.edges(0);
  for (int k = 1; k < dex.nz - 1; ++k)
    for (int j = 1; j < dex.ny - 1; ++j)
      for (int i = 0; i < dex.nx; ++i)
        out.comp[0][dex.lin(i, j, k)] =
            (fz[dfz.lin(i, j, k)] - fz[dfz.lin(i, j - 1, k)] -
             fy[dfy.lin(i, j, k)] + fy[dfy.lin(i, j, k - 1)]) * inv_h;
  Dims3 dey = g.edges(1);
  for (int k = 1; k < dey.nz - 1; ++k)
    for (int j = 0; j < dey.ny; ++j)
      for (int i = 1; i < dey.nx - 1; ++i)
        out.comp[1][dey.lin(i, j, k)] =
            (fx[dfx.lin(i, j, k)] - fx[dfx.lin(i, j, k - 1)] -
             fz[dfz.lin(i, j, k)] + fz[dfz.lin(i - 1, j, k)]) * inv_h;
  Dims3 dez = g.edges(2);
  for (int k = 0; k < dez.nz; ++k)
    for (int j = 1; j < dez.ny - 1; ++j)
      for (int i = 1; i < dez.nx - 1; ++i)
        out.comp[2][dez.lin(i, j, k)] =
            (fy[dfy.lin(i, j, k)] - fy[dfy.lin(i - 1, j, k)] -
             fx[dfx.lin(i, j, k)] + fx[dfx.lin(i, j - 1, k)]) * inv_h;
  return out;
}

ScalarField div_edge_to_node(const VectorField& v) {
  if (v.placement != Placement::Edge)
    throw ConfigError("div_edge_to_node expects an edge field");
  const Grid& g = v.grid;
  ScalarField out(g, Placement::Node);
  const double inv_h = 1.0 / g.h;
  Dims3 dn = g.nodes();
  Dims3 dex = g.edges(0), dey = g.edges(1), dez = g.edges(2);
  for (int k = 1; k < dn.nz - 1; ++k)
    for (int j = 1; j < dn.ny - 1; ++j)
      for (int i = 1; i < dn.nx - 1; ++i)
        out.v[dn.lin(i, j, k)] =
            (v.comp[0][dex.lin(i, j, k)] - v.comp[0][dex.lin(i - 1, j, k)] +
             v.comp[1][dey.lin(i, j, k)] - v.comp[1][dey.lin(i, j - 1, k)] +
             v.comp[2][dez.lin(i, j, k)] - v.comp[2][dez.lin(i, j, k - 1)]) * inv_h;
  return out;
}

ScalarField cell_average(const ScalarField& s) {
  if (s.placement != Placement::Node)
    throw ConfigError("cell_average expects a node scalar");
  const Grid& g = s.grid;
  ScalarField out(g, Placement::Cell);
  Dims3 dc = g.cells();
  for (int k = 0; k < dc.nz; ++k)
    for (int j = 0; j < dc.ny; ++j)
      for (int i = 0; i < dc.nx; ++i) {
        double acc = 0;
        for (int dk = 0; dk < 2; ++dk)
          for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) acc += s.at(i + di, j + dj, k + dk);
        out.v[dc.lin(i, j, k)] = acc / 8.0;
      }
  return out;
}

ScalarField grad_transpose(const VectorField& v) {
  if (v.placement != Placement::Edge)
    throw ConfigError("grad_transpose expects an edge field");
  const Grid& g = v.grid;
  ScalarField out(g, Placement::Node);
  const double inv_h = 1.0 / g.h;
  Dims3 dn = g.nodes();
  for (int a = 0; a < 3; ++a) {
    Dims3 d = g.edges(a);
    int di = a == 0, dj = a == 1, dk = a == 2;
    for (int k = 0; k < d.nz; ++k)
      for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i) {
          double val = v.comp[a][d.lin(i, j, k)] * inv_h;
          out.v[dn.lin(i, j, k)] -= val;
          out.v[dn.lin(i + di, j + dj, k + dk)] += val;
        }
  }
  return out;
}

VectorField curl_transpose(const VectorField& v) {
  if (v.placement != Placement::Face)
    throw ConfigError("curl_transpose expects a face field");
  const Grid& g = v.grid;
  VectorField out(g, Placement::Edge);
  const double inv_h = 1.0 / g.h;
  auto& ex = out.comp[0];
  auto& ey = out.comp[1];
  auto& ez = out.comp[2];
  Dims3 dex = g.edges(0), dey = g.edges(1), dez = g.edges(2);

  Dims3 dfx = g.faces(0);
  for (int k = 0; k < dfx.nz; ++k)
    for (int j = 0; j < dfx.ny; ++j)
      for (int i = 0; i < dfx.nx; ++i) {
        double val = v.comp[0][dfx.lin(i, j, k)] * inv_h;
        ez[dez.lin(i, j + 1, k)] += val;
        ez[dez.lin(i, j, k)] -= val;
        ey[dey.lin(i, j, k + 1)] -= val;
        ey[dey.lin(i, j, k)] += val;
      }
  Dims3 dfy = g.faces(1);
  for (int k = 0; k < dfy.nz; ++k)
    for (int j = 0; j < dfy.ny; ++j)
      for (int i = 0; i < dfy.nx; ++i) {
        double val = v.comp[1][dfy.lin(i, j, k)] * inv_h;
        ex[dex.lin(i, j, k + 1)] += val;
        ex[dex.lin(i, j, k)] -= val;
        ez[dez.lin(i + 1, j, k)] -= val;
        ez[dez.lin(i, j, k)] += val;
      }
  Dims3 dfz = g.faces(2);
  for (int k = 0; k < dfz.nz; ++k)
    for (int j = 0; j < dfz.ny; ++j)
      for (int i = 0; i < dfz.nx; ++i) {
        double val = v.comp[2][dfz.lin(i, j, k)] * inv_h;
        ey[dey.lin(i + 1, j, k)] += val;
        ey[dey.lin(i, j, k)] -= val;
        ex[dex.lin(i, j + 1, k)] -= val;
        ex[dex.lin(i, j, k)] += val;
      }
  return out;
}

ScalarField sample_nodes(const Grid& g, const std::function<double(Vec3)>& f,
                         std::string name) {
  ScalarField out(g, Placement::Node, std::move(name));
  Dims3 d = g.nodes();
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) out.v[d.lin(i, j, k)] = f(g.node_pos(i, j, k));
  return out;
}

ScalarField sample_cells(const Grid& g, const std::function<double(Vec3)>& f,
                         std::string name) {
  ScalarField out(g, Placement::Cell, std::move(name));
  Dims3 d = g.cells();
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i)
        out.v[d.lin(i, j, k)] = f(g.cell_center(i, j, k));
  return out;
}

VectorField sample_vector(const Grid& g, Placement p,
                          const std::function<Vec3(Vec3)>& f, std::string name) {
  VectorField out(g, p, std::move(name));
  for (int a = 0; a < 3; ++a) {
    Dims3 d = out.dims(a);
    for (int k = 0; k < d.nz; ++k)
      for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i)
          out.comp[a][d.lin(i, j, k)] = f(out.component_pos(a, i, j, k))[a];
  }
  return out;
}

namespace {
double trilinear(const std::vector<double>& arr, Dims3 d, Vec3 frac) {
  // frac: fractional index coordinates in the component lattice.
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
  if (d.nx == 1) { i0 = 0; tx = 0; }
  if (d.ny == 1) { j0 = 0; ty = 0; }
  if (d.nz == 1) { k0 = 0; tz = 0; }
  auto v = [&](int a, int b, int c) {
    return arr[d.lin(std::min(i0 + a, d.nx - 1), std::min(j0 + b, d.ny - 1),
                     std::min(k0 + c, d.nz - 1))];
  };
  double c00 = v(0, 0, 0) * (1 - tx) + v(1, 0, 0) * tx;
  double c10 = v(0, 1, 0) * (1 - tx) + v(1, 1, 0) * tx;
  double c01 = v(0, 0, 1) * (1 - tx) + v(1, 0, 1) * tx;
  double c11 = v(0, 1, 1) * (1 - tx) + v(1, 1, 1) * tx;
  double c0 = c00 * (1 - ty) + c10 * ty;
  double c1 = c01 * (1 - ty) + c11 * ty;
  return c0 * (1 - tz) + c1 * tz;
}
}  // namespace

double interp(const ScalarField& f, Vec3 p) {
  const Grid& g = f.grid;
  Vec3 u = (p - g.origin) / g.h;
  if (f.placement == Placement::Cell) u = u - Vec3{0.5, 0.5, 0.5};
  return trilinear(f.v, f.dims(), u);
}

Vec3 interp(const VectorField& f, Vec3 p) {
  const Grid& g = f.grid;
  Vec3 out;
  for (int a = 0; a < 3; ++a) {
    Vec3 u = (p - g.origin) / g.h;
    if (f.placement == Placement::Edge) {
      u[a] -= 0.5;
    } else {
      for (int b = 0; b < 3; ++b)
        if (b != a) u[b] -= 0.5;
    }
    out[a] = trilinear(f.comp[a], f.dims(a), u);
  }
  return out;
}

}  // namespace glpin
