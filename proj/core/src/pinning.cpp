#include "glpin/pinning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "glpin/ops.hpp"
#include "glpin/solvers.hpp"
#include "glpin/util.hpp"

namespace glpin {

namespace {

// G_i = (grad^T w grad rho)_i - node_w_i rho_i (a_i - rho_i^2) / eps^2.
// Zeros of G are the weighted finite volume form of the weight equation.
void eval_G(const PinningModel& m, const ScalarField& rho,
            std::vector<double>& out) {
  ScalarField k = apply_weighted_laplacian(m.w.edge_w, rho);
  double ie2 = 1.0 / (m.eps * m.eps);
  out.resize(rho.v.size());
  for (size_t i = 0; i < rho.v.size(); ++i) {
    double r = rho.v[i];
    out[i] = k.v[i] - m.w.node_w.v[i] * r * (m.a.v[i] - r * r) * ie2;
  }
}

double masked_norm2(const std::vector<double>& v,
                    const std::vector<std::uint8_t>& mask) {
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i)
    if (mask[i]) s += v[i] * v[i];
  return s;
}

}  // namespace

Weight solve_rho(const PinningModel& m, double tol) {
  const Grid& g = m.a.grid;
  if (m.eps <= 0) throw ConfigError("pinning eps must be positive");
  if (m.b <= 0 || m.b >= 1) throw ConfigError("pinning b must lie in (0,1)");
  if (m.eps < 2 * g.h)
    std::fprintf(stderr,
                 "warning: eps = %g under-resolved on h = %g (eps < 2h)\n",
                 m.eps, g.h);
  for (size_t i = 0; i < m.a.v.size(); ++i)
    if (m.w.node_w.v[i] > 0 &&
        (m.a.v[i] < m.b - 1e-12 || m.a.v[i] > 1 + 1e-12))
      throw ConfigError("pinning field leaves [b,1]");

  size_t nn = m.a.v.size();
  std::vector<std::uint8_t> mask(nn);
  for (size_t i = 0; i < nn; ++i) mask[i] = m.w.node_w.v[i] > 0 ? 1 : 0;

  Weight out;
  out.rho = ScalarField(g, Placement::Node);
  for (size_t i = 0; i < nn; ++i) out.rho.v[i] = std::sqrt(m.a.v[i]);

  double ie2 = 1.0 / (m.eps * m.eps);
  double scale = ie2;  // reaction term magnitude, a and rho are order one

  // diagonal of grad^T w grad: per node, adjacent edge weights over h^2
  std::vector<double> diag0(nn, 0.0);
  for (int axis = 0; axis < 3; ++axis) {
    Dims3 ed = g.edges(axis);
    int di = axis == 0, dj = axis == 1, dk = axis == 2;
    for (int k = 0; k < ed.nz; ++k)
      for (int j = 0; j < ed.ny; ++j)
        for (int i = 0; i < ed.nx; ++i) {
          double w = m.w.edge_w.comp[axis][ed.lin(i, j, k)] / (g.h * g.h);
          diag0[g.nodes().lin(i, j, k)] += w;
          diag0[g.nodes().lin(i + di, j + dj, k + dk)] += w;
        }
  }

  std::vector<double> G, Gtrial, delta(nn, 0.0), diag(nn), rhs(nn);
  std::vector<double> history;
  eval_G(m, out.rho, G);
  double gn = std::sqrt(masked_norm2(G, mask));

  const int max_newton = 50;
  int it = 0;
  for (; it < max_newton; ++it) {
    // convergence in the pointwise finite volume sense: every node residual
    // |G_i| / node_w_i below tol * scale
    double worst = 0;
    for (size_t i = 0; i < nn; ++i)
      if (mask[i]) worst = std::max(worst, std::abs(G[i]) / m.w.node_w.v[i]);
    history.push_back(worst);
    if (worst <= tol * scale) break;

    // Jacobian K + diag(node_w (3 rho^2 - a)/eps^2), SPD once rho^2 > a/3
    ScalarField rho_s = out.rho;
    for (size_t i = 0; i < nn; ++i) {
      double r = rho_s.v[i];
      diag[i] = diag0[i] + m.w.node_w.v[i] * (3 * r * r - m.a.v[i]) * ie2;
      if (diag[i] <= 0) diag[i] = 1;
      rhs[i] = mask[i] ? -G[i] : 0.0;
    }
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
      ScalarField xf(g, Placement::Node);
      xf.v = x;
      ScalarField k = apply_weighted_laplacian(m.w.edge_w, xf);
      for (size_t i = 0; i < nn; ++i) {
        double r = rho_s.v[i];
        y[i] = k.v[i] + m.w.node_w.v[i] * (3 * r * r - m.a.v[i]) * ie2 * x[i];
      }
    };
    std::fill(delta.begin(), delta.end(), 0.0);
    CGReport rep = cg_solve(apply, rhs, delta, &diag, &mask, false, 1e-10,
                            4000);
    if (!rep.converged)
      throw SolverError("pinning Newton step: cg stalled at rel residual " +
                        std::to_string(rep.rel_residual));

    // line search on ||G||
    double lam = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 10; ++ls) {
      ScalarField trial = out.rho;
      for (size_t i = 0; i < nn; ++i)
        if (mask[i]) trial.v[i] += lam * delta[i];
      eval_G(m, trial, Gtrial);
      double gt = std::sqrt(masked_norm2(Gtrial, mask));
      if (gt <= (1 - 0.25 * lam) * gn || gt < 1e-300) {
        out.rho = trial;
        G.swap(Gtrial);
        gn = gt;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "pinning Newton stagnated, residual history:";
      for (double r : history) msg << " " << r;
      throw SolverError(msg.str());
    }
  }
  if (it == max_newton) {
    std::ostringstream msg;
    msg << "pinning Newton did not converge, residual history:";
    for (double r : history) msg << " " << r;
    throw SolverError(msg.str());
  }
  out.newton_iters = it;

  // independent residual check, straight from the fields
  eval_G(m, out.rho, G);
  double worst = 0;
  for (size_t i = 0; i < nn; ++i)
    if (mask[i]) worst = std::max(worst, std::abs(G[i]) / m.w.node_w.v[i]);
  out.residual = worst;

  double lo = std::sqrt(m.b) - 1e-8, hi = 1 + 1e-8;
  out.bounds_ok = true;
  for (size_t i = 0; i < nn; ++i)
    if (mask[i] && (out.rho.v[i] < lo || out.rho.v[i] > hi))
      out.bounds_ok = false;

  out.holder = holder_report(out.rho, 0.5, 4000);
  return out;
}

HolderReport holder_report(const ScalarField& rho, double alpha,
                           int sample_pairs, std::uint64_t seed) {
  if (alpha <= 0 || alpha >= 1)
    throw ConfigError("holder exponent must lie in (0,1)");
  const Grid& g = rho.grid;
  Rng rng(seed);
  HolderReport rep;
  rep.alpha = alpha;
  rep.pairs = sample_pairs;
  auto pick = [&](int n) { return rng.uniform_int(0, n - 1); };
  for (int k = 0; k < sample_pairs; ++k) {
    int i0 = pick(g.n.nx), j0 = pick(g.n.ny), k0 = pick(g.n.nz);
    int i1 = pick(g.n.nx), j1 = pick(g.n.ny), k1 = pick(g.n.nz);
    Vec3 p = g.node_pos(i0, j0, k0), q = g.node_pos(i1, j1, k1);
    double d = (p - q).norm();
    if (d < g.h) continue;
    double diff = std::abs(rho.at(i0, j0, k0) - rho.at(i1, j1, k1));
    rep.seminorm = std::max(rep.seminorm, diff / std::pow(d, alpha));
  }
  return rep;
}

double implied_log_exponent(double seminorm, double c1, double eps) {
  if (c1 <= 0 || eps <= 0 || eps >= 1)
    throw ConfigError("implied exponent needs c1 > 0 and eps in (0,1)");
  double l = std::abs(std::log(eps));
  if (seminorm <= 0) return -std::numeric_limits<double>::infinity();
  return std::log(seminorm / c1) / std::log(l);
}

bool holder_within(double seminorm, double c1, double N, double eps) {
  double l = std::abs(std::log(eps));
  return seminorm <= c1 * std::pow(l, N);
}

ScalarField pinning_constant(const Grid& g, double value) {
  if (value <= 0 || value > 1)
    throw ConfigError("constant pinning value must lie in (0,1]");
  ScalarField a(g, Placement::Node);
  for (auto& v : a.v) v = value;
  return a;
}

ScalarField pinning_impurities(const Grid& g, double b, int count, double sigma,
                               std::uint64_t seed) {
  if (b <= 0 || b >= 1) throw ConfigError("impurity floor must lie in (0,1)");
  if (sigma <= 0) throw ConfigError("impurity width must be positive");
  Rng rng(seed);
  std::vector<Vec3> centers;
  Vec3 lo = g.box_min(), hi = g.box_max();
  for (int k = 0; k < count; ++k)
    centers.push_back({rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y),
                       rng.uniform(lo.z, hi.z)});
  return sample_nodes(g, [&](Vec3 p) {
    double dip = 0;
    for (const Vec3& c : centers)
      dip += std::exp(-(p - c).norm2() / (2 * sigma * sigma));
    return 1.0 - (1.0 - b) * std::min(1.0, dip);
  });
}

ScalarField pinning_periodic(const Grid& g, double b, double wavelength) {
  if (b <= 0 || b >= 1) throw ConfigError("periodic floor must lie in (0,1)");
  if (wavelength <= 0) throw ConfigError("wavelength must be positive");
  double w = 2 * M_PI / wavelength;
  return sample_nodes(g, [&](Vec3 p) {
    double osc = std::cos(w * p.x) * std::cos(w * p.y) * std::cos(w * p.z);
    return b + (1.0 - b) * 0.5 * (1.0 + osc);
  });
}

}  // namespace glpin
