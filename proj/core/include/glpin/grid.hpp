#pragma once
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "glpin/util.hpp"

namespace glpin {

struct Dims3 {
  int nx = 0, ny = 0, nz = 0;
  std::size_t count() const {
    return std::size_t(nx) * std::size_t(ny) * std::size_t(nz);
  }
  std::size_t lin(int i, int j, int k) const {  // x-fastest
    return (std::size_t(k) * ny + j) * nx + i;
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && i < nx && j >= 0 && j < ny && k >= 0 && k < nz;
  }
};

// Uniform node-centered box grid. Scalars live on nodes or cell centers,
// vector components on edge midpoints or face centers (staggered).
struct Grid {
  Vec3 origin;   // position of node (0,0,0)
  double h = 0;  // spacing, same in all axes
  Dims3 n;       // node counts per axis
  int pad = 8;   // cell margin kept between the domain and the box boundary

  Dims3 nodes() const { return n; }
  Dims3 cells() const { return {n.nx - 1, n.ny - 1, n.nz - 1}; }
  Dims3 edges(int axis) const {
    Dims3 d = n;
    if (axis == 0) d.nx -= 1;
    if (axis == 1) d.ny -= 1;
    if (axis == 2) d.nz -= 1;
    return d;
  }
  Dims3 faces(int axis) const {  // faces with normal along `axis`
    Dims3 d{n.nx - 1, n.ny - 1, n.nz - 1};
    if (axis == 0) d.nx = n.nx;
    if (axis == 1) d.ny = n.ny;
    if (axis == 2) d.nz = n.nz;
    return d;
  }

  Vec3 node_pos(int i, int j, int k) const {
    return origin + h * Vec3{double(i), double(j), double(k)};
  }
  Vec3 cell_center(int i, int j, int k) const {
    return origin + h * Vec3{i + 0.5, j + 0.5, k + 0.5};
  }
  Vec3 edge_mid(int axis, int i, int j, int k) const {
    Vec3 o{double(i), double(j), double(k)};
    o[axis] += 0.5;
    return origin + h * o;
  }
  Vec3 face_center(int axis, int i, int j, int k) const {
    Vec3 o{i + 0.5, j + 0.5, k + 0.5};
    o[axis] -= 0.5;
    return origin + h * o;
  }
  Vec3 box_min() const { return origin; }
  Vec3 box_max() const { return node_pos(n.nx - 1, n.ny - 1, n.nz - 1); }
};

// Symmetric grid around `center` whose box keeps `pad` cells of margin
// beyond a bounding radius.
Grid make_grid(Vec3 center, double radius, double h, int pad = 8);

enum class Placement : int { Node = 0, Cell = 1, Edge = 2, Face = 3 };

struct ScalarField {
  Grid grid;
  Placement placement = Placement::Node;
  std::vector<double> v;
  std::string name;

  ScalarField() = default;
  ScalarField(const Grid& g, Placement p, std::string nm = "")
      : grid(g), placement(p), name(std::move(nm)) {
    v.assign(dims().count(), 0.0);
  }
  Dims3 dims() const {
    return placement == Placement::Node ? grid.nodes() : grid.cells();
  }
  double& at(int i, int j, int k) { return v[dims().lin(i, j, k)]; }
  double at(int i, int j, int k) const { return v[dims().lin(i, j, k)]; }
};

struct VectorField {
  Grid grid;
  Placement placement = Placement::Edge;  // Edge or Face
  std::array<std::vector<double>, 3> comp;
  std::string name;

  VectorField() = default;
  VectorField(const Grid& g, Placement p, std::string nm = "")
      : grid(g), placement(p), name(std::move(nm)) {
    for (int a = 0; a < 3; ++a) comp[a].assign(dims(a).count(), 0.0);
  }
  Dims3 dims(int axis) const {
    return placement == Placement::Edge ? grid.edges(axis) : grid.faces(axis);
  }
  double& at(int axis, int i, int j, int k) {
    return comp[axis][dims(axis).lin(i, j, k)];
  }
  double at(int axis, int i, int j, int k) const {
    return comp[axis][dims(axis).lin(i, j, k)];
  }
  Vec3 component_pos(int axis, int i, int j, int k) const {
    return placement == Placement::Edge ? grid.edge_mid(axis, i, j, k)
                                        : grid.face_center(axis, i, j, k);
  }
};

// Order parameter stored in polar form so the phase survives |u| = 0 cells.
struct ComplexField {
  Grid grid;
  std::vector<double> mod, phase;  // node placed
  std::string name;

  ComplexField() = default;
  explicit ComplexField(const Grid& g, std::string nm = "")
      : grid(g), name(std::move(nm)) {
    mod.assign(g.nodes().count(), 1.0);
    phase.assign(g.nodes().count(), 0.0);
  }
};

}  // namespace glpin
