#include <cmath>

#include "doctest.h"
#include "glpin/ops.hpp"
#include "glpin/solvers.hpp"

using namespace glpin;

TEST_CASE("cg solves a small SPD system") {
  // mass-shifted Laplacian on a 1D chain, embedded by hand
  const int n = 50;
  ApplyFn apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double acc = 3.0 * x[size_t(i)];
      if (i > 0) acc -= x[size_t(i - 1)];
      if (i < n - 1) acc -= x[size_t(i + 1)];
      y[size_t(i)] = acc;
    }
  };
  std::vector<double> rhs(n), x;
  for (int i = 0; i < n; ++i) rhs[size_t(i)] = std::sin(0.3 * i);
  std::vector<double> diag(n, 3.0);
  CGReport rep = cg_solve(apply, rhs, x, &diag, nullptr, false, 1e-12, 500);
  CHECK(rep.converged);
  std::vector<double> y;
  apply(x, y);
  for (int i = 0; i < n; ++i)
    CHECK(y[size_t(i)] == doctest::Approx(rhs[size_t(i)]).epsilon(1e-8));
}

TEST_CASE("gradient projection recovers a potential") {
  Grid g = make_grid({0, 0, 0}, 1.0, 1.0 / 12, 2);
  Domain dom{{0, 0, 0}, 1.0};
  CutCellWeights w = make_weights(g, dom);

  ScalarField truth = sample_nodes(g, [](Vec3 p) {
    return std::sin(p.x) * p.y + 0.3 * p.z * p.z;
  });
  VectorField v = gradient(truth);
  ScalarField f = project_gradient(w.edge_w, v, nullptr, 1e-12);
  VectorField df = gradient(f);
  // gradients agree wherever the weight sees them
  double err = 0;
  for (int a = 0; a < 3; ++a)
    for (size_t i = 0; i < df.comp[a].size(); ++i)
      if (w.edge_w.comp[a][i] > 0)
        err = std::max(err, std::abs(df.comp[a][i] - v.comp[a][i]));
  CHECK(err < 1e-7);
}

TEST_CASE("gradient projection residual is weighted-divergence-free") {
  Grid g = make_grid({0, 0, 0}, 1.0, 1.0 / 10, 2);
  Domain dom{{0, 0, 0}, 1.0};
  CutCellWeights w = make_weights(g, dom);
  Rng rng(31);
  VectorField v(g, Placement::Edge);
  for (int a = 0; a < 3; ++a)
    for (auto& val : v.comp[a]) val = rng.uniform(-1, 1);

  ScalarField f = project_gradient(w.edge_w, v, nullptr, 1e-12);
  VectorField j = gradient(f);
  for (int a = 0; a < 3; ++a)
    for (size_t i = 0; i < j.comp[a].size(); ++i)
      j.comp[a][i] = w.edge_w.comp[a][i] * (v.comp[a][i] - j.comp[a][i]);
  // grad^T of the weighted residual vanishes: that is the normal equation
  ScalarField div = grad_transpose(j);
  double scale = 0;
  for (int a = 0; a < 3; ++a)
    for (double val : j.comp[a]) scale = std::max(scale, std::abs(val));
  double worst = 0;
  for (double val : div.v) worst = std::max(worst, std::abs(val));
  CHECK(worst <= 1e-8 * (1 + scale) / g.h);
}

TEST_CASE("free-space Poisson reproduces the potential of a uniform ball") {
  double a = 0.3;  // source radius
  Grid g = make_grid({0, 0, 0}, 1.0, 1.0 / 16, 6);
  Domain src{{0, 0, 0}, a};
  ScalarField rhs = cell_fractions(g, src);
  ScalarField u = solve_free_space_poisson(rhs, 2, nullptr, 1e-11);

  auto exact = [&](double r) {
    return r >= a ? a * a * a / (3 * r) : (a * a - r * r / 3) / 2;
  };
  for (double r : {0.0, 0.15, 0.45, 0.7, 0.95}) {
    Vec3 p{r, 0, 0};
    double got = interp(u, p);
    CHECK(std::abs(got - exact(r)) < 0.02 * exact(0.0));
  }
  // spot-check an off-axis point too
  Vec3 q{0.3, 0.4, 0.2};
  CHECK(interp(u, q) == doctest::Approx(exact(q.norm())).epsilon(0.03));
}

TEST_CASE("newtonian potential direct sum matches the solve far away") {
  Grid g = make_grid({0, 0, 0}, 0.8, 0.1, 4);
  Domain src{{0, 0, 0}, 0.25};
  ScalarField rhs = cell_fractions(g, src);
  ScalarField u = solve_free_space_poisson(rhs, 1, nullptr, 1e-11);
  for (Vec3 p : {Vec3{0.9, 0, 0}, Vec3{0, -0.85, 0.3}}) {
    CHECK(interp(u, p) == doctest::Approx(newtonian_potential(rhs, p)).epsilon(0.02));
  }
}
