#pragma once

#include <span>
#include <vector>

#include "nlsconserve/field.hpp"

namespace nls {

/// Power nonlinearity f(z) = lambda*|z|^(p-1)*z with potential density
/// V(z) = (2*lambda/(p+1))*|z|^(p+1), so that f = dV/d(conj z) and
/// Im(conj(z)*f(z)) = 0. lambda < 0 is focusing, lambda > 0 defocusing.
struct PowerNonlinearity {
  double lambda = 1.0;
  double p = 3.0;

  Complex apply(Complex z) const;                 // f(z), f(0) = 0
  double potential(Complex z) const;              // V(z)
  double potential_radial_derivative(double r) const;  // V'(r) = 2*lambda*r^p

  /// L2-critical exponent test: |p - (1 + 4/dim)| <= 1e-12.
  bool is_critical(int dim) const;
};

/// Validates p > 1 (finite lambda); throws std::invalid_argument otherwise.
PowerNonlinearity make_nonlinearity(double lambda, double p);

/// Energy-subcritical range check p <= 1 + 4/(dim-2) for dim >= 3; throws
/// std::invalid_argument when violated. No-op for dim <= 2.
void check_exponent_range(const PowerNonlinearity& nl, int dim);

/// Pointwise nonlinear term f(u).
ComplexField nonlinear_term(const PowerNonlinearity& nl, const ComplexField& u);

/// Potential energy integral of V over the box.
double potential_energy(const PowerNonlinearity& nl, const ComplexField& u);

/// Integral of W(u) = (d+2)*V(u) - (d/2)*V'(|u|)*|u|, evaluated pointwise.
/// Equals 2*potential_energy - scaling_derivative up to roundoff and
/// vanishes identically at the critical exponent p = 1 + 4/d.
double w_integral(const PowerNonlinearity& nl, const ComplexField& u);

/// Derivative of the potential energy along the L2-preserving dilation
/// v_lambda(x) = lambda^{d/2} v(lambda x) at lambda = 1:
/// -d*potential_energy + (d/2)*integral of V'(|u|)*|u|.
double scaling_derivative(const PowerNonlinearity& nl, const ComplexField& u);

/// Structural checks of the nonlinearity at sample points: phase-pairing
/// residual |Im(conj(z) f(z))|, gauge residual |f(e^{i theta} z) - e^{i theta} f(z)|,
/// and a Wirtinger finite-difference residual |f(z) - dV/d(conj z)|_FD.
/// Reports, never throws.
struct AssumptionSample {
  Complex z;
  double phase_pairing_residual;
  double gauge_residual;
  double wirtinger_residual;
  bool pass;
};

struct AssumptionReport {
  std::vector<AssumptionSample> samples;
  double max_phase_pairing = 0.0;
  double max_gauge = 0.0;
  double max_wirtinger = 0.0;
  bool pass = true;
};

AssumptionReport check_assumptions(const PowerNonlinearity& nl, std::span<const Complex> samples);

}  // namespace nls
