#include "glpin/grid.hpp"

#include <cmath>

namespace glpin {

Grid make_grid(Vec3 center, double radius, double h, int pad) {
  if (h <= 0) throw ConfigError("grid spacing must be positive");
  if (pad < 0) throw ConfigError("grid pad must be nonnegative");
  // Half-extent covering the radius plus pad cells, rounded to whole cells.
  int half_cells = int(std::ceil(radius / h)) + pad;
  int n = 2 * half_cells + 1;
  if (n < 4) throw ConfigError("grid dims must be at least 4 per axis");
  Grid g;
  g.h = h;
  g.pad = pad;
  g.n = {n, n, n};
  double half = half_cells * h;
  g.origin = center - Vec3{half, half, half};
  return g;
}

}  // namespace glpin
