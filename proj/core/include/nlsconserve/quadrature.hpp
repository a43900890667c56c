#pragma once

#include <array>
#include <span>
#include <vector>

namespace nls {

enum class QuadRule { trapezoid, simpson, gauss4 };

const char* to_string(QuadRule rule);

/// Weights of a composite closed rule on [0, panels*h] with uniform samples
/// s_m = m*h, m = 0..panels. For `simpson`, odd panel counts close with a
/// 3/8 segment so the rule stays 4th order; a single panel falls back to the
/// trapezoid. `gauss4` has no closed uniform-sample form and is rejected.
/// Throws std::invalid_argument for panels < 1 or an incompatible rule.
std::vector<double> composite_weights(int panels, double h, QuadRule rule);

/// Running integral F_m = int_0^{s_m} f ds of uniformly sampled values
/// (spacing h). Uses composite Simpson with a trapezoid closure on the final
/// panel when the panel count up to s_m is odd; exact on polynomials of
/// degree <= 1 at every index and degree <= 3 at even indices.
/// Requires values.size() >= 3.
std::vector<double> running_integral(std::span<const double> values, double h);

/// Second antiderivative: int_0^{t_m} int_0^s f(tau) dtau ds, computed by
/// composing running_integral with itself.
std::vector<double> double_running_integral(std::span<const double> values, double h);

/// 4-point Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre4 {
  std::array<double, 4> nodes;
  std::array<double, 4> weights;
};
const GaussLegendre4& gauss_legendre4();

}  // namespace nls
