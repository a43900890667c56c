#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsconserve/nonlinearity.hpp"
#include "nlsconserve/oracle.hpp"
#include "test_support.hpp"

using namespace nls;
using nlstest::rel_err;

TEST_CASE("nonlinearity: construction guards") {
  CHECK_THROWS_AS(make_nonlinearity(1.0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(make_nonlinearity(1.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(make_nonlinearity(-1.0, 3.0));
  CHECK_NOTHROW(make_nonlinearity(0.0, 2.2));  // lambda = 0 switches the term off

  const PowerNonlinearity cubic = make_nonlinearity(1.0, 3.0);
  CHECK_NOTHROW(check_exponent_range(cubic, 3));      // p = 3 <= 5 at d = 3
  const PowerNonlinearity steep = make_nonlinearity(1.0, 6.0);
  CHECK_THROWS_AS(check_exponent_range(steep, 3), std::invalid_argument);
  CHECK_NOTHROW(check_exponent_range(steep, 1));
}

TEST_CASE("nonlinearity: criticality flag") {
  CHECK(make_nonlinearity(1.0, 5.0).is_critical(1));
  CHECK(make_nonlinearity(1.0, 3.0).is_critical(2));
  CHECK_FALSE(make_nonlinearity(1.0, 3.0).is_critical(1));
}

TEST_CASE("f: cubic value, zero value, Wirtinger derivative of V") {
  const PowerNonlinearity cubic = make_nonlinearity(1.0, 3.0);
  CHECK(rel_err(cubic.apply(Complex(2.0, 0.0)).real(), 8.0) <= 1e-14);
  CHECK(std::abs(cubic.apply(Complex(2.0, 0.0)).imag()) <= 1e-14);
  CHECK(cubic.apply(Complex(0.0, 0.0)) == Complex(0.0, 0.0));

  // f = dV/d(conj z) checked by central differences at z = 1 + i.
  const PowerNonlinearity frac = make_nonlinearity(-1.0, 2.5);
  const Complex z(1.0, 1.0);
  const double h = 1e-6;
  const double dva = (frac.potential(z + Complex(h, 0)) - frac.potential(z - Complex(h, 0))) / (2 * h);
  const double dvb = (frac.potential(z + Complex(0, h)) - frac.potential(z - Complex(0, h))) / (2 * h);
  const Complex fd = 0.5 * Complex(dva, dvb);
  CHECK(std::abs(frac.apply(z) - fd) <= 1e-6 * std::abs(frac.apply(z)));
}

TEST_CASE("potential energy: zero, constant field, quadrature oracle") {
  const Grid g = make_grid(1, 128, 20.0);
  const PowerNonlinearity cubic = make_nonlinearity(1.0, 3.0);
  CHECK(potential_energy(cubic, zero_field(g)) == 0.0);

  ComplexField constant = zero_field(g);
  const Complex c(0.8, -0.3);
  for (Complex& z : constant.values) z = c;
  // (2 lambda/(p+1)) |c|^(p+1) L = |c|^4 L / 2 for the cubic case.
  const double expected = 0.5 * std::pow(std::abs(c), 4.0) * g.length;
  CHECK(rel_err(potential_energy(cubic, constant), expected) <= 1e-13);

  // Gaussian against a refined quadrature oracle of the closed-form density.
  const Grid fine_grid = make_grid(1, 256, 40.0);
  const ComplexField bump = nlstest::gaussian_field(fine_grid, 1.3, 0.9);
  const auto density = [&](double x) {
    const double amp = 0.9 * std::exp(-x * x / (2.0 * 1.3 * 1.3));
    return 0.5 * std::pow(amp, 4.0);
  };
  const int panels = 200000;
  const double a = -20.0, h = 40.0 / panels;
  double oracle = density(a) + density(20.0);
  for (int j = 1; j < panels; ++j) oracle += (j % 2 == 1 ? 4.0 : 2.0) * density(a + j * h);
  oracle *= h / 3.0;
  CHECK(rel_err(potential_energy(cubic, bump), oracle) <= 1e-10);
}

TEST_CASE("w integral: critical cancellation, cubic closed form") {
  const Grid g = make_grid(1, 128, 30.0);
  const PowerNonlinearity critical = make_nonlinearity(-1.0, 5.0);
  const ComplexField u = nlstest::enveloped_random_field(g, 7);
  double p6_norm = 0.0;
  for (const Complex& z : u.values) p6_norm += std::pow(std::abs(z), 6.0);
  p6_norm *= g.spacing;
  CHECK(std::abs(w_integral(critical, u)) <= 1e-12 * std::max(1.0, p6_norm));
  CHECK(w_integral(critical, zero_field(g)) == 0.0);

  // d = 1, p = 3: W reduces to (lambda/2)|u|^4.
  const PowerNonlinearity cubic = make_nonlinearity(0.7, 3.0);
  double quartic = 0.0;
  for (const Complex& z : u.values) quartic += std::pow(std::abs(z), 4.0);
  quartic *= g.spacing;
  CHECK(rel_err(w_integral(cubic, u), 0.5 * 0.7 * quartic) <= 1e-12);
}

TEST_CASE("scaling derivative: finite-difference oracle and critical identity") {
  const Grid g = make_grid(1, 256, 40.0);
  const PowerNonlinearity frac = make_nonlinearity(-1.0, 2.5);
  CHECK(scaling_derivative(frac, zero_field(g)) == 0.0);

  const ComplexField u = nlstest::gaussian_field(g, 1.2, 1.1, 0.5);
  const double closed = scaling_derivative(frac, u);
  const double fd = fd_scaling_derivative(frac, u, 1e-4);
  CHECK(std::abs(closed - fd) <= 1e-6 * std::max(1.0, std::abs(closed)));

  const PowerNonlinearity critical = make_nonlinearity(1.0, 5.0);
  const double d_sc = scaling_derivative(critical, u);
  const double two_v = 2.0 * potential_energy(critical, u);
  CHECK(rel_err(d_sc, two_v) <= 1e-12);
}

TEST_CASE("W-consistency: w_integral = 2 potential - scaling derivative") {
  const Grid g = make_grid(1, 128, 30.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexField u = nlstest::enveloped_random_field(g, seed);
    for (double p : {2.2, 3.0, 5.0}) {
      const PowerNonlinearity nl = make_nonlinearity(seed % 2 == 0 ? 1.0 : -1.0, p);
      const double lhs = w_integral(nl, u);
      const double rhs = 2.0 * potential_energy(nl, u) - scaling_derivative(nl, u);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(potential_energy(nl, u))));
    }
  }
}

TEST_CASE("gauge and homogeneity of the nonlinear term") {
  const Grid g = make_grid(1, 64, 16.0);
  const ComplexField u = nlstest::random_field(g, 17);
  const PowerNonlinearity nl = make_nonlinearity(-1.0, 2.7);

  const double theta = 1.234;
  const Complex rot(std::cos(theta), std::sin(theta));
  ComplexField rotated = u;
  scale(rotated, rot);
  ComplexField f_rotated = nonlinear_term(nl, rotated);
  ComplexField rotated_f = nonlinear_term(nl, u);
  scale(rotated_f, rot);
  CHECK(l2_norm(subtract(f_rotated, rotated_f)) <= 1e-12 * l2_norm(rotated_f));

  const double c = 1.7;
  ComplexField scaled = u;
  scale(scaled, Complex(c, 0.0));
  ComplexField f_scaled = nonlinear_term(nl, scaled);
  ComplexField scaled_f = nonlinear_term(nl, u);
  scale(scaled_f, Complex(std::pow(c, nl.p), 0.0));
  CHECK(l2_norm(subtract(f_scaled, scaled_f)) <= 1e-12 * l2_norm(scaled_f));
}

TEST_CASE("check_assumptions: zero sample, random cubic samples, fractional exponent") {
  const PowerNonlinearity cubic = make_nonlinearity(-1.0, 3.0);
  const Complex zero(0.0, 0.0);
  const AssumptionReport zero_report = check_assumptions(cubic, std::span<const Complex>(&zero, 1));
  CHECK(zero_report.pass);
  CHECK(zero_report.max_phase_pairing == 0.0);
  CHECK(zero_report.max_gauge == 0.0);
  CHECK(zero_report.max_wirtinger == 0.0);

  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.5);
  std::vector<Complex> samples;
  for (int i = 0; i < 100; ++i) samples.emplace_back(gauss(rng), gauss(rng));
  const AssumptionReport report = check_assumptions(cubic, samples);
  CHECK(report.pass);
  CHECK(report.max_gauge <= 1e-12);

  const PowerNonlinearity frac = make_nonlinearity(1.0, 1.5);
  std::vector<Complex> circle;
  for (int i = 0; i < 32; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / 32.0;
    circle.emplace_back(std::cos(phi), std::sin(phi));
  }
  const AssumptionReport circle_report = check_assumptions(frac, circle);
  CHECK(circle_report.max_phase_pairing <= 1e-14);
  CHECK(circle_report.pass);
}
