#include "nlsconserve/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nls {

std::size_t Grid::num_points() const {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  return total;
}

bool Grid::compatible_with(const Grid& other) const {
  return dim == other.dim && n == other.n && length == other.length;
}

int Grid::axis_index(std::size_t idx, int axis) const {
  // Row-major, axis 0 slowest: idx = (i0*n + i1)*n + i2 ...
  std::size_t stride = 1;
  for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
  return static_cast<int>((idx / stride) % static_cast<std::size_t>(n));
}

double Grid::coord(std::size_t idx, int axis) const {
  return coords[static_cast<std::size_t>(axis_index(idx, axis))];
}

double Grid::freq(std::size_t idx, int axis) const {
  return freqs[static_cast<std::size_t>(axis_index(idx, axis))];
}

Grid make_grid(int dim, int n, double length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_grid: dim must be 1, 2 or 3, got " + std::to_string(dim));
  if (n < 4) throw std::invalid_argument("make_grid: n must be >= 4, got " + std::to_string(n));
  if (n % 2 != 0)
    throw std::invalid_argument("make_grid: n must be even, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("make_grid: box length must be positive and finite");

  Grid g;
  g.dim = dim;
  g.n = n;
  g.length = length;
  g.spacing = length / n;
  g.coords.resize(static_cast<std::size_t>(n));
  g.freqs.resize(static_cast<std::size_t>(n));
  const double two_pi_over_l = 2.0 * std::numbers::pi / length;
  for (int j = 0; j < n; ++j) {
    g.coords[static_cast<std::size_t>(j)] = -0.5 * length + j * g.spacing;
    const int k = (j < n / 2) ? j : j - n;  // wraparound mode number
    g.freqs[static_cast<std::size_t>(j)] = two_pi_over_l * k;
  }
  return g;
}

}  // namespace nls
