#pragma once

#include "glpin/grid.hpp"

namespace glpin {

// Ball domain given by its exact signed distance. Negative inside.
struct Domain {
  Vec3 center{0, 0, 0};
  double radius{1};

  double dist(Vec3 p) const { return (p - center).norm() - radius; }
  Vec3 normal(Vec3 p) const;
  bool inside(Vec3 p) const { return dist(p) < 0; }
};

Domain make_ball_domain(Vec3 center, double radius, const Grid& grid);

// Volume fraction of the cube of side h centered at the evaluation point on
// which the linearization d_center + g.(x - x_c) is negative.
double plane_cell_fraction(double d_center, Vec3 grad_d, double h);

// Cell-placed fractions of each cell lying inside the domain.
ScalarField cell_fractions(const Grid& g, const Domain& dom);

// Shared cut-cell quadrature weights. Every solver and every energy sum over
// Omega uses these same weights so that discrete integration by parts between
// node, edge and cell quantities is exact.
struct CutCellWeights {
  ScalarField frac;    // cell fractions in [0,1]
  VectorField edge_w;  // per edge: sum of adjacent cell fractions * h^3/4
  ScalarField node_w;  // per node: sum of adjacent cell fractions * h^3/8
};
CutCellWeights make_weights(const Grid& g, const Domain& dom);
CutCellWeights make_weights(const Grid& g, const ScalarField& frac);

enum class Region { Box, Omega, Tube, OmegaMinusTube };

struct RegionSpec {
  Region kind{Region::Box};
  const Domain* domain{nullptr};           // required for Omega variants
  const ScalarField* curve_dist{nullptr};  // cell-placed distance to the curve
  double tube_radius{0};

  static RegionSpec box() { return {}; }
  static RegionSpec omega(const Domain& d) {
    RegionSpec r;
    r.kind = Region::Omega;
    r.domain = &d;
    return r;
  }
  static RegionSpec tube(const Domain& d, const ScalarField& dist, double rho) {
    RegionSpec r;
    r.kind = Region::Tube;
    r.domain = &d;
    r.curve_dist = &dist;
    r.tube_radius = rho;
    return r;
  }
  static RegionSpec omega_minus_tube(const Domain& d, const ScalarField& dist,
                                     double rho) {
    RegionSpec r = tube(d, dist, rho);
    r.kind = Region::OmegaMinusTube;
    return r;
  }
};

// Smoothed indicator of {dist < rho}, half a cell wide.
inline double tube_ramp(double dist, double rho, double h) {
  double t = (rho - dist) / h + 0.5;
  return t < 0 ? 0 : (t > 1 ? 1 : t);
}

// Cut-cell quadrature of a node- or cell-placed scalar over the region.
double integrate(const ScalarField& f, const RegionSpec& region);

}  // namespace glpin
