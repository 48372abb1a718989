#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "glpin/domain.hpp"
#include "glpin/grid.hpp"

namespace glpin {

struct CGReport {
  int iters{0};
  double rel_residual{0};
  bool converged{false};
};

using ApplyFn =
    std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Preconditioned conjugate gradients. `mask` (optional) freezes entries:
// residual and search direction are zeroed there, x keeps its initial values.
// `remove_mean` projects the constant mode out of residual and iterate over
// the unmasked entries (for pure Neumann systems).
CGReport cg_solve(const ApplyFn& apply, const std::vector<double>& rhs,
                  std::vector<double>& x,
                  const std::vector<double>* jacobi_diag,
                  const std::vector<std::uint8_t>* mask, bool remove_mean,
                  double rel_tol, int max_iter);

// Least-squares potential: minimizes sum_e w_e ((grad f)_e - v_e)^2 over node
// scalars f. Natural boundary condition; the constant mode is fixed to mean 0
// over nodes with positive weight degree.
ScalarField project_gradient(const VectorField& edge_w, const VectorField& v,
                             CGReport* rep = nullptr, double rel_tol = 1e-10,
                             int max_iter = 4000);

// y = (grad^T diag(w) grad) f for node scalars, the operator behind
// project_gradient and the pinning Newton steps.
ScalarField apply_weighted_laplacian(const VectorField& edge_w,
                                     const ScalarField& f);

// Newtonian potential (kernel 1/(4 pi r)) of a cell-placed source, direct sum.
double newtonian_potential(const ScalarField& rhs_cells, Vec3 p);

// -lap u = rhs on the cell lattice with Dirichlet values on the outermost
// cell layer taken from the Newtonian potential of rhs (evaluated directly at
// a strided subset of boundary cells, bilinearly filled in between).
ScalarField solve_free_space_poisson(const ScalarField& rhs_cells,
                                     int boundary_stride = 2,
                                     CGReport* rep = nullptr,
                                     double rel_tol = 1e-10,
                                     int max_iter = 4000);

// Harmonic function on a ball written in solid harmonics,
// f = sum c_lm (r/R)^l Y_lm. Valid inside and in a thin shell outside;
// the series grows like (r/R)^lmax beyond the boundary.
struct BallHarmonics {
  Vec3 center;
  double radius{1};
  int lmax{0};
  std::vector<double> coef;  // packed per l: m=0, then (cos, sin) pairs

  double eval(Vec3 p) const;
};

// Interior Neumann problem lap f = 0 in the ball, df/dnu = data on the
// sphere. The mean of the data is projected out (compatibility) and
// reported through data_mean when given; the solution is pinned by a zero
// l=0 coefficient. Quadrature: Gauss-Legendre in latitude times uniform
// longitude, exact through degree lmax.
BallHarmonics solve_ball_neumann(Vec3 center, double radius,
                                 const std::function<double(Vec3)>& data,
                                 int lmax, double* data_mean = nullptr);

}  // namespace glpin
