#pragma once

#include <cstddef>
#include <vector>

namespace nls {

/// Uniform discretization of the periodic box [-L/2, L/2)^d.
///
/// Coordinates are the centered sawtooth values x_j = -L/2 + j*h, stored in
/// ascending order. Angular frequencies xi_k = 2*pi*k/L, k in [-n/2, n/2),
/// are stored in DFT wraparound order (0, 1, ..., n/2-1, -n/2, ..., -1) so
/// that spectral multipliers line up with transform output without any
/// permutation. The box is cubic: every axis shares `coords` and `freqs`.
struct Grid {
  int dim = 0;           // 1, 2 or 3
  int n = 0;             // points per axis, even, >= 4
  double length = 0.0;   // box edge L
  double spacing = 0.0;  // h = L/n
  std::vector<double> coords;
  std::vector<double> freqs;

  std::size_t num_points() const;

  // Same discretization (dim, n, length agree exactly).
  bool compatible_with(const Grid& other) const;

  // Coordinate of the flat row-major index `idx` along `axis`
  // (axis 0 varies slowest).
  double coord(std::size_t idx, int axis) const;
  double freq(std::size_t idx, int axis) const;
  int axis_index(std::size_t idx, int axis) const;
};

/// Builds a grid, validating dim in {1,2,3}, n even and >= 4, length > 0.
/// Throws std::invalid_argument on violation.
Grid make_grid(int dim, int n, double length);

}  // namespace nls
