#pragma once

#include <utility>
#include <vector>

#include "glpin/curve.hpp"
#include "glpin/domain.hpp"
#include "glpin/grid.hpp"

namespace glpin {

// Field of one straight current segment [a,b] with the 1/2 prefactor
// convention: X(p) = 1/2 int (q - p) x dq / |q - p|^3. Closed form, no
// quadrature. Throws GeometryError within 1e-12 of the segment.
Vec3 segment_field(Vec3 p, Vec3 a, Vec3 b);

// Sum over all segments of a closed curve.
Vec3 eval_X(Vec3 p, const FramedCurve& fc);

// Circulation source field with a cached grid sampling.
struct BiotSavartField {
  FramedCurve fc;

  explicit BiotSavartField(FramedCurve f) : fc(std::move(f)) {}
  Vec3 eval(Vec3 p) const { return eval_X(p, fc); }
  // Midpoint component samples on the edge lattice, reused when the same
  // grid is asked for again.
  const VectorField& sample_edges(const Grid& g);

 private:
  bool cached_{false};
  VectorField cache_;
};

// Split into the osculating line field Y (magnitude exactly 1/dist) and the
// bounded remainder h = X - Y. Only defined inside the tube.
struct NearSplit {
  Vec3 Y;
  Vec3 h;
};
NearSplit near_split(Vec3 p, const Tube& tube);

// j, A, f with j = X - A + grad f on Omega, nu.j = 0 on the boundary, and
// -lap A = j restricted to Omega on the surrounding box. f is the harmonic
// correction solved spectrally on the ball from its Neumann data.
struct CorrectedFields {
  VectorField j;  // edge field, zero outside Omega
  VectorField A;  // edge field on the whole box
  ScalarField f;  // node scalar; zero beyond a thin shell outside Omega
  double flux_residual{0};   // max |nu.j| sampled on the boundary sphere
  double compat_defect{0};   // mean of the Neumann data over the sphere
  int iterations{0};
};

CorrectedFields solve_jA(const FramedCurve& fc, const Domain& dom,
                         const Grid& g, int boundary_stride = 4);

// C = 1/2 int |curl A|^2 + lim_{rho->0} (1/2 int_{Omega minus tube} |j|^2
//     + pi |curve inside Omega| log rho), extrapolated linearly in rho.
struct RenormalizedConstant {
  double c{0};
  double uncertainty{0};
  std::vector<std::pair<double, double>> table;  // (rho, bracket value)
};

RenormalizedConstant c_omega(const FramedCurve& fc, const Domain& dom,
                             const CorrectedFields& fields,
                             const std::vector<double>& tube_radii);

}  // namespace glpin
