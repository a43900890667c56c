#include "nlsconserve/nonlinearity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nls {

namespace {

// |z|^q via exp(q*log|z|), with the q > 0 branch value 0 at z = 0.
double abs_pow(double r, double q) {
  if (r == 0.0) return 0.0;
  return std::exp(q * std::log(r));
}

}  // namespace

Complex PowerNonlinearity::apply(Complex z) const {
  const double r = std::abs(z);
  if (r == 0.0) return Complex(0.0, 0.0);
  return lambda * abs_pow(r, p - 1.0) * z;
}

double PowerNonlinearity::potential(Complex z) const {
  return (2.0 * lambda / (p + 1.0)) * abs_pow(std::abs(z), p + 1.0);
}

double PowerNonlinearity::potential_radial_derivative(double r) const {
  return 2.0 * lambda * abs_pow(r, p);
}

bool PowerNonlinearity::is_critical(int dim) const {
  return std::abs(p - (1.0 + 4.0 / dim)) <= 1e-12;
}

PowerNonlinearity make_nonlinearity(double lambda, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("make_nonlinearity: exponent p must satisfy p > 1, got " +
                                std::to_string(p));
  if (!std::isfinite(lambda))
    throw std::invalid_argument("make_nonlinearity: lambda must be finite");
  return PowerNonlinearity{lambda, p};
}

void check_exponent_range(const PowerNonlinearity& nl, int dim) {
  if (dim >= 3 && nl.p > 1.0 + 4.0 / (dim - 2) + 1e-12)
    throw std::invalid_argument("exponent p = " + std::to_string(nl.p) +
                                " exceeds the admissible range p <= 1 + 4/(d-2) for d = " +
                                std::to_string(dim));
}

ComplexField nonlinear_term(const PowerNonlinearity& nl, const ComplexField& u) {
  ComplexField out = u;
  for (Complex& z : out.values) z = nl.apply(z);
  return out;
}

double potential_energy(const PowerNonlinearity& nl, const ComplexField& u) {
  std::vector<double> terms(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) terms[i] = nl.potential(u.values[i]);
  return std::pow(u.grid.spacing, u.grid.dim) * pairwise_sum(std::span<const double>(terms));
}

double w_integral(const PowerNonlinearity& nl, const ComplexField& u) {
  const int d = u.grid.dim;
  std::vector<double> terms(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double r = std::abs(u.values[i]);
    terms[i] = (d + 2) * nl.potential(u.values[i]) -
               0.5 * d * nl.potential_radial_derivative(r) * r;
  }
  return std::pow(u.grid.spacing, d) * pairwise_sum(std::span<const double>(terms));
}

double scaling_derivative(const PowerNonlinearity& nl, const ComplexField& u) {
  const int d = u.grid.dim;
  std::vector<double> terms(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double r = std::abs(u.values[i]);
    terms[i] = -d * nl.potential(u.values[i]) +
               0.5 * d * nl.potential_radial_derivative(r) * r;
  }
  return std::pow(u.grid.spacing, d) * pairwise_sum(std::span<const double>(terms));
}

AssumptionReport check_assumptions(const PowerNonlinearity& nl,
                                   std::span<const Complex> samples) {
  AssumptionReport report;
  report.samples.reserve(samples.size());
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double fd_step = 1e-6;

  std::size_t index = 0;
  for (Complex z : samples) {
    AssumptionSample s{};
    s.z = z;

    s.phase_pairing_residual = std::abs(std::imag(std::conj(z) * nl.apply(z)));

    const double theta = golden_angle * static_cast<double>(++index);
    const Complex rot(std::cos(theta), std::sin(theta));
    s.gauge_residual = std::abs(nl.apply(rot * z) - rot * nl.apply(z));

    // dV/d(conj z) = (dV/da + i dV/db)/2 for z = a + i b, via central
    // differences scaled to the sample magnitude.
    const double h = fd_step * std::max(1.0, std::abs(z));
    const Complex ha(h, 0.0), hb(0.0, h);
    const double dva = (nl.potential(z + ha) - nl.potential(z - ha)) / (2.0 * h);
    const double dvb = (nl.potential(z + hb) - nl.potential(z - hb)) / (2.0 * h);
    s.wirtinger_residual = std::abs(nl.apply(z) - 0.5 * Complex(dva, dvb));

    const double tol = 1e-6 * (1.0 + abs_pow(std::abs(z), nl.p)) * std::abs(nl.lambda == 0.0 ? 1.0 : nl.lambda);
    s.pass = s.phase_pairing_residual <= tol && s.gauge_residual <= tol &&
             s.wirtinger_residual <= tol;

    report.max_phase_pairing = std::max(report.max_phase_pairing, s.phase_pairing_residual);
    report.max_gauge = std::max(report.max_gauge, s.gauge_residual);
    report.max_wirtinger = std::max(report.max_wirtinger, s.wirtinger_residual);
    report.pass = report.pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace nls
