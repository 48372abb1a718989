#pragma once

#include <cstdint>

#include "glpin/domain.hpp"
#include "glpin/grid.hpp"

namespace glpin {

// Pinning term a(x) with values in [b, 1] plus the coherence length, together
// with the quadrature weights of the domain the weight equation lives on.
struct PinningModel {
  ScalarField a;  // node placement
  double b{0.25};
  double eps{0.05};
  CutCellWeights w;
};

struct HolderReport {
  double alpha{0};
  double seminorm{0};
  int pairs{0};
};

// Solution of -lap rho = rho (a - rho^2) / eps^2 with natural boundary
// conditions. The bounds sqrt(b) <= rho <= 1 are checked after the solve,
// never enforced by clamping.
struct Weight {
  ScalarField rho;
  double residual{0};  // sup of |lap rho + rho(a - rho^2)/eps^2| over Omega
  bool bounds_ok{false};
  int newton_iters{0};
  HolderReport holder;
};

// Damped Newton from the initial guess rho = sqrt(a). The returned residual
// is re-evaluated independently of the iteration, in units of 1/eps^2.
Weight solve_rho(const PinningModel& model, double tol);

// Sampled lower bound of the alpha-Holder seminorm, pairs at distance >= h.
HolderReport holder_report(const ScalarField& rho, double alpha,
                           int sample_pairs, std::uint64_t seed = 1234);

// Exponent N with seminorm == c1 |log eps|^N, and the corresponding check
// seminorm <= c1 |log eps|^N for a given N.
double implied_log_exponent(double seminorm, double c1, double eps);
bool holder_within(double seminorm, double c1, double N, double eps);

// Pinning field generators. All stay inside [b, 1].
ScalarField pinning_constant(const Grid& g, double value);
ScalarField pinning_impurities(const Grid& g, double b, int count, double sigma,
                               std::uint64_t seed);
ScalarField pinning_periodic(const Grid& g, double b, double wavelength);

}  // namespace glpin
