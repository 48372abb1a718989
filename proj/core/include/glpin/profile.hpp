#pragma once

#include <utility>
#include <vector>

namespace glpin {

// Modulus of the degree one radial vortex: f'' + f'/r - f/r^2 + f(1-f^2) = 0
// with f(0) = 0 and f -> 1 at infinity. Samples live on a grid uniform in
// t = r/(1+r); evaluation is cubic Hermite, extended past rmax by the
// quadratic tail 1 - f ~ const/r^2.
struct VortexProfile {
  std::vector<double> r, f, fp;  // fp = df/dr
  double rmax{0};
  double dt{0};        // spacing of the underlying t grid
  double residual{0};  // sup norm of the discrete system at the solution

  double eval(double rr) const;
  double eval_deriv(double rr) const;
  double slope_origin() const { return fp.empty() ? 0.0 : fp.front(); }
};

VortexProfile solve_profile(double rmax, int n);

// I(R) = 1/2 int_0^R (f'^2 + f^2/r^2 + (1-f^2)^2/2) r dr. Purely radial, the
// angular 2 pi is applied explicitly by the callers that need it.
double radial_energy(const VortexProfile& p, double R);

struct GammaEstimate {
  double gamma{0};
  double uncertainty{0};
  bool converged{false};
  // (R, 2 pi I(R) - pi log R) at the radii used for extrapolation
  std::vector<std::pair<double, double>> table;
};

// Limit of 2 pi I(R) - pi log R, Richardson extrapolation in 1/R^2.
GammaEstimate gamma_constant(const VortexProfile& p);

}  // namespace glpin
