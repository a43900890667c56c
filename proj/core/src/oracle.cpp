#include "nlsconserve/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlsconserve/spectral.hpp"

namespace nls {

ComplexField dense_propagate(const ComplexField& u, double t) {
  const Grid& g = u.grid;
  if (g.n > 32 || g.dim > 2)
    throw std::invalid_argument("dense_propagate: guarded to n <= 32 and dim <= 2");

  const std::size_t total = g.num_points();
  const auto nsz = static_cast<std::size_t>(g.n);
  const double inv_total = 1.0 / static_cast<double>(total);
  const double two_pi_over_n = 2.0 * std::numbers::pi / g.n;

  // Forward: c_k = sum_j u_j exp(-2 pi i j.k / n), explicit sums.
  std::vector<Complex> coeff(total, Complex(0.0, 0.0));
  for (std::size_t kflat = 0; kflat < total; ++kflat) {
    const std::size_t k0 = g.dim == 1 ? kflat : kflat / nsz;
    const std::size_t k1 = g.dim == 1 ? 0 : kflat % nsz;
    Complex acc(0.0, 0.0);
    for (std::size_t jflat = 0; jflat < total; ++jflat) {
      const std::size_t j0 = g.dim == 1 ? jflat : jflat / nsz;
      const std::size_t j1 = g.dim == 1 ? 0 : jflat % nsz;
      const double phase =
          -two_pi_over_n * (static_cast<double>(j0 * k0) + static_cast<double>(j1 * k1));
      acc += u.values[jflat] * Complex(std::cos(phase), std::sin(phase));
    }
    coeff[kflat] = acc;
  }

  // Multiplier exp(-i t |xi|^2 / 2), then the inverse sum with 1/n^d.
  for (std::size_t kflat = 0; kflat < total; ++kflat) {
    double xi_sq = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      const double xi = g.freq(kflat, axis);
      xi_sq += xi * xi;
    }
    const double phase = -0.5 * t * xi_sq;
    coeff[kflat] *= Complex(std::cos(phase), std::sin(phase));
  }

  ComplexField out = zero_field(g);
  for (std::size_t jflat = 0; jflat < total; ++jflat) {
    const std::size_t j0 = g.dim == 1 ? jflat : jflat / nsz;
    const std::size_t j1 = g.dim == 1 ? 0 : jflat % nsz;
    Complex acc(0.0, 0.0);
    for (std::size_t kflat = 0; kflat < total; ++kflat) {
      const std::size_t k0 = g.dim == 1 ? kflat : kflat / nsz;
      const std::size_t k1 = g.dim == 1 ? 0 : kflat % nsz;
      const double phase =
          two_pi_over_n * (static_cast<double>(j0 * k0) + static_cast<double>(j1 * k1));
      acc += coeff[kflat] * Complex(std::cos(phase), std::sin(phase));
    }
    out.values[jflat] = acc * inv_total;
  }
  return out;
}

double fd_scaling_derivative(const PowerNonlinearity& nl, const ComplexField& u, double h) {
  if (!(h >= 1e-6 && h <= 1e-2))
    throw std::invalid_argument("fd_scaling_derivative: h must lie in [1e-6, 1e-2]");
  const double d_half = 0.5 * u.grid.dim;
  auto potential_at = [&](double lam) {
    ComplexField v = sample_dilated(u, lam);
    scale(v, Complex(std::pow(lam, d_half), 0.0));
    return potential_energy(nl, v);
  };
  return (potential_at(1.0 + h) - potential_at(1.0 - h)) / (2.0 * h);
}

ExactSolution ExactSolution::plane_wave(Complex amplitude, std::vector<double> wave_vector) {
  ExactSolution sol;
  sol.kind_ = Kind::plane_wave;
  sol.amplitude_ = amplitude;
  sol.wave_vector_ = std::move(wave_vector);
  return sol;
}

ExactSolution ExactSolution::soliton_1d() {
  ExactSolution sol;
  sol.kind_ = Kind::soliton_1d;
  return sol;
}

void ExactSolution::check_validity(const Grid& grid, const PowerNonlinearity& nl) const {
  if (kind_ == Kind::soliton_1d) {
    if (grid.dim != 1) throw std::invalid_argument("soliton_1d: requires dim == 1");
    if (std::abs(nl.p - 3.0) > 1e-12 || std::abs(nl.lambda + 1.0) > 1e-12)
      throw std::invalid_argument("soliton_1d: requires p = 3, lambda = -1");
    if (grid.length < 30.0)
      throw std::invalid_argument("soliton_1d: box must satisfy L >= 30 to resolve the tails");
    return;
  }
  if (static_cast<int>(wave_vector_.size()) != grid.dim)
    throw std::invalid_argument("plane_wave: wave vector dimension mismatch");
  for (double k : wave_vector_) {
    const double mode = k * grid.length / (2.0 * std::numbers::pi);
    if (std::abs(mode - std::round(mode)) > 1e-9)
      throw std::invalid_argument("plane_wave: wave vector must sit on the frequency lattice");
  }
}

double ExactSolution::omega(const PowerNonlinearity& nl) const {
  double k_sq = 0.0;
  for (double k : wave_vector_) k_sq += k * k;
  const double amp = std::abs(amplitude_);
  const double amp_pow = amp == 0.0 ? 0.0 : std::exp((nl.p - 1.0) * std::log(amp));
  return 0.5 * k_sq + nl.lambda * amp_pow;
}

ComplexField ExactSolution::evaluate(const Grid& grid, const PowerNonlinearity& nl,
                                     double t) const {
  check_validity(grid, nl);
  ComplexField u = zero_field(grid);
  if (kind_ == Kind::plane_wave) {
    const double w = omega(nl);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      double k_dot_x = 0.0;
      for (int axis = 0; axis < grid.dim; ++axis)
        k_dot_x += wave_vector_[static_cast<std::size_t>(axis)] * grid.coord(i, axis);
      const double phase = k_dot_x - w * t;
      u.values[i] = amplitude_ * Complex(std::cos(phase), std::sin(phase));
    }
  } else {
    const Complex rot(std::cos(0.5 * t), std::sin(0.5 * t));
    for (std::size_t i = 0; i < u.values.size(); ++i)
      u.values[i] = rot / std::cosh(grid.coord(i, 0));
  }
  return u;
}

ComplexField ExactSolution::analytic_time_derivative(const Grid& grid,
                                                     const PowerNonlinearity& nl,
                                                     double t) const {
  ComplexField u = evaluate(grid, nl, t);
  const Complex factor = kind_ == Kind::plane_wave ? Complex(0.0, -omega(nl))
                                                   : Complex(0.0, 0.5);
  scale(u, factor);
  return u;
}

double ExactSolution::substitution_residual(const Grid& grid, const PowerNonlinearity& nl,
                                            double t) const {
  const ComplexField u = evaluate(grid, nl, t);
  ComplexField residual = analytic_time_derivative(grid, nl, t);
  scale(residual, Complex(0.0, 1.0));                               // i du/dt
  add_scaled(residual, Complex(0.5, 0.0), laplacian(u));            // + Lap(u)/2
  add_scaled(residual, Complex(-1.0, 0.0), nonlinear_term(nl, u));  // - f(u)
  return l2_norm(residual);
}

}  // namespace nls
