#include "fpattern/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fpattern/errors.hpp"
#include "fpattern/parallel.hpp"

namespace fpattern {

Grid2D make_grid(int nx, int ny, Bounds bounds) {
  if (nx < 4) throw ConfigError("grid: nx must be >= 4 (got " + std::to_string(nx) + ")");
  if (ny < 4) throw ConfigError("grid: ny must be >= 4 (got " + std::to_string(ny) + ")");
  if (!std::isfinite(bounds.xmin) || !std::isfinite(bounds.xmax) ||
      !(bounds.xmax > bounds.xmin))
    throw ConfigError("grid: xmax must exceed xmin");
  if (!std::isfinite(bounds.ymin) || !std::isfinite(bounds.ymax) ||
      !(bounds.ymax > bounds.ymin))
    throw ConfigError("grid: ymax must exceed ymin");
  Grid2D g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.bounds_ = bounds;
  g.hx_ = (bounds.xmax - bounds.xmin) / (nx - 1);
  g.hy_ = (bounds.ymax - bounds.ymin) / (ny - 1);
  return g;
}

ScalarField2D ScalarField2D::from_function(
    const Grid2D& grid, const std::function<double(double, double)>& f) {
  ScalarField2D out(grid);
  parallel_rows(grid.ny(), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.x(i), grid.y(j));
  });
  return out;
}

double ScalarField2D::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField2D::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField2D::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

VectorField2D::VectorField2D(ScalarField2D cx, ScalarField2D cy)
    : x(std::move(cx)), y(std::move(cy)) {
  if (!(x.grid() == y.grid())) throw ConfigError("vector field components on different grids");
}

std::size_t Mask2D::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Mask2D boundary_ring(const Grid2D& grid) {
  Mask2D m(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i)
      if (grid.on_boundary(i, j)) m.set(i, j, true);
  return m;
}

}  // namespace fpattern
