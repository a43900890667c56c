#pragma once

#include <vector>

#include "nlsconserve/field.hpp"

namespace nls {

/// Unnormalized forward DFT coefficients of u (wraparound mode order,
/// row-major like the field itself). The inverse carries the 1/n^d factor.
std::vector<Complex> dft_coefficients(const ComplexField& u);

/// Inverse of dft_coefficients (applies 1/n^d).
ComplexField field_from_coefficients(const Grid& grid, std::vector<Complex> coeffs);

/// Spectral partial derivative along one axis (multiplier i*xi_axis).
ComplexField partial_derivative(const ComplexField& u, int axis);

/// Spectral gradient; exact on resolved trigonometric polynomials.
VectorField gradient(const ComplexField& u);

/// Spectral Laplacian (multiplier -|xi|^2).
ComplexField laplacian(const ComplexField& u);

/// Free propagator U(t) = exp(i*t*Laplacian/2): multiplier exp(-i*t*|xi|^2/2).
/// An L2 isometry and a one-parameter group up to roundoff.
ComplexField free_propagate(const ComplexField& u, double t);

/// Pointwise multiplication by the sawtooth coordinate, component j = x_j*u.
/// Only meaningful for boundary-negligible fields: when the L2 mass in the
/// outer 10% shell exceeds kBoundaryMassThreshold of the total, a warning is
/// appended to `warnings` (if given).
VectorField weight_x(const ComplexField& u, std::vector<std::string>* warnings = nullptr);

/// Galilean operator J(t)u = x*u + i*t*grad(u); J(0) = x, and
/// J(t) = U(t) x U(-t) within spectral accuracy on boundary-negligible fields.
VectorField galilean(const ComplexField& u, double t,
                     std::vector<std::string>* warnings = nullptr);

/// Zeroes all modes with wraparound index |k| > n/3 on any axis (2/3 rule).
ComplexField dealias_two_thirds(const ComplexField& u);

/// Evaluates the trigonometric interpolant of u at the dilated points
/// lambda*x (periodically wrapped), on the same grid. Exact for resolved
/// fields up to roundoff; used by the scaling-derivative oracle.
ComplexField sample_dilated(const ComplexField& u, double lambda);

}  // namespace nls
