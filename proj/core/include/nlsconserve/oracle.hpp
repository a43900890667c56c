#pragma once

#include <string>
#include <vector>

#include "nlsconserve/field.hpp"
#include "nlsconserve/nonlinearity.hpp"

namespace nls {

/// Brute-force references. Everything here is deliberately slow and
/// structurally independent of the fast transform path, so it can arbitrate
/// when a kernel is suspect.

/// Free propagator by explicit double sums over points and modes (no fast
/// transform anywhere). Guarded to n <= 32 and dim <= 2; throws above that.
ComplexField dense_propagate(const ComplexField& u, double t);

/// Centered finite difference of lambda -> potential_energy(lambda^{d/2} u(lambda x))
/// at lambda = 1, resampled spectrally. O(h^2); h must lie in [1e-6, 1e-2].
double fd_scaling_derivative(const PowerNonlinearity& nl, const ComplexField& u, double h);

/// Closed-form reference solutions, each re-validated by substitution into
/// the evolution equation before use.
class ExactSolution {
 public:
  /// A*exp(i(k.x - omega t)) with omega = |k|^2/2 + lambda*|A|^(p-1).
  /// k must sit on the frequency lattice of the target grid.
  static ExactSolution plane_wave(Complex amplitude, std::vector<double> wave_vector);

  /// sech(x)*exp(i t/2); requires dim == 1, p == 3, lambda == -1, L >= 30.
  static ExactSolution soliton_1d();

  ComplexField evaluate(const Grid& grid, const PowerNonlinearity& nl, double t) const;

  /// ||i*du/dt + Laplacian(u)/2 - f(u)||_L2 with the analytic du/dt; should
  /// sit at spectral accuracy when the grid resolves the profile.
  double substitution_residual(const Grid& grid, const PowerNonlinearity& nl, double t) const;

  bool is_plane_wave() const { return kind_ == Kind::plane_wave; }
  bool is_soliton() const { return kind_ == Kind::soliton_1d; }

 private:
  enum class Kind { plane_wave, soliton_1d };
  Kind kind_ = Kind::plane_wave;
  Complex amplitude_{1.0, 0.0};
  std::vector<double> wave_vector_;

  void check_validity(const Grid& grid, const PowerNonlinearity& nl) const;
  double omega(const PowerNonlinearity& nl) const;
  ComplexField analytic_time_derivative(const Grid& grid, const PowerNonlinearity& nl,
                                        double t) const;
};

}  // namespace nls
