#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlsconserve/grid.hpp"

namespace nls {

using Complex = std::complex<double>;

/// Complex-valued state sampled on a Grid, row-major (axis 0 slowest).
struct ComplexField {
  Grid grid;
  std::vector<Complex> values;
};

/// d complex fields on one shared grid (gradients, x*u, J(t)u, ...).
struct VectorField {
  std::vector<ComplexField> components;

  int dim() const { return static_cast<int>(components.size()); }
  const Grid& grid() const { return components.front().grid; }
};

ComplexField zero_field(const Grid& grid);
VectorField zero_vector_field(const Grid& grid);

bool all_finite(const ComplexField& u);

/// (u, v) = h^d * sum_x u(x) * conj(v(x)); conjugate-linear in the second
/// argument. Pairwise-summed, so the reduction order is fixed and the
/// roundoff stays near machine precision on large grids.
/// Throws std::invalid_argument on grid mismatch.
Complex inner_product(const ComplexField& u, const ComplexField& v);

double norm_sq(const ComplexField& u);  // (u,u).real()
double l2_norm(const ComplexField& u);
double norm_sq(const VectorField& w);   // sum over components

/// Fraction of the L2 mass sitting in the outer 10% shell of the box
/// (points with |x_axis| >= 0.45*L on any axis). Returns 0 for u == 0.
double boundary_mass_fraction(const ComplexField& u);

/// Mass fraction above which the position weight (and everything built on
/// it) stops being trustworthy on the periodic box.
inline constexpr double kBoundaryMassThreshold = 1e-8;

// In-place linear algebra used by the time steppers.
void add_scaled(ComplexField& u, Complex a, const ComplexField& v);  // u += a*v
void scale(ComplexField& u, Complex a);
ComplexField subtract(const ComplexField& u, const ComplexField& v);
double max_abs_diff(const ComplexField& u, const ComplexField& v);

// Deterministic pairwise reductions (fixed order, O(log n) error growth).
double pairwise_sum(std::span<const double> xs);
Complex pairwise_sum(std::span<const Complex> xs);

/// Plain-text field file, format NLSF1:
///   NLSF1 d=<d> n=<n> L=<L>
/// followed by n^d lines "re im" in row-major order, 17 significant digits.
void write_field(std::ostream& out, const ComplexField& u);
void write_field_file(const std::string& path, const ComplexField& u);
ComplexField read_field(std::istream& in);
ComplexField read_field_file(const std::string& path);

}  // namespace nls
