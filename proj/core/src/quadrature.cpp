#include "nlsconserve/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace nls {

const char* to_string(QuadRule rule) {
  switch (rule) {
    case QuadRule::trapezoid: return "trapezoid";
    case QuadRule::simpson: return "simpson";
    case QuadRule::gauss4: return "gauss4";
  }
  return "?";
}

std::vector<double> composite_weights(int panels, double h, QuadRule rule) {
  if (panels < 1) throw std::invalid_argument("composite_weights: need at least one panel");
  std::vector<double> w(static_cast<std::size_t>(panels) + 1, 0.0);
  switch (rule) {
    case QuadRule::trapezoid: {
      w.front() = 0.5 * h;
      w.back() = 0.5 * h;
      for (int m = 1; m < panels; ++m) w[static_cast<std::size_t>(m)] = h;
      return w;
    }
    case QuadRule::simpson: {
      if (panels == 1) return composite_weights(1, h, QuadRule::trapezoid);
      int simpson_panels = panels;
      if (panels % 2 != 0) simpson_panels = panels - 3;  // close with one 3/8 segment
      for (int m = 0; m + 2 <= simpson_panels; m += 2) {
        w[static_cast<std::size_t>(m)] += h / 3.0;
        w[static_cast<std::size_t>(m + 1)] += 4.0 * h / 3.0;
        w[static_cast<std::size_t>(m + 2)] += h / 3.0;
      }
      if (panels % 2 != 0) {
        const int b = simpson_panels;  // may be 0 for panels == 3
        w[static_cast<std::size_t>(b)] += 3.0 * h / 8.0;
        w[static_cast<std::size_t>(b + 1)] += 9.0 * h / 8.0;
        w[static_cast<std::size_t>(b + 2)] += 9.0 * h / 8.0;
        w[static_cast<std::size_t>(b + 3)] += 3.0 * h / 8.0;
      }
      return w;
    }
    case QuadRule::gauss4:
      throw std::invalid_argument(
          "composite_weights: gauss4 has no uniform-sample weights; integrate at Gauss nodes");
  }
  throw std::invalid_argument("composite_weights: unknown rule");
}

std::vector<double> running_integral(std::span<const double> values, double h) {
  if (values.size() < 3)
    throw std::invalid_argument("running_integral: need at least 3 samples, got " +
                                std::to_string(values.size()));
  std::vector<double> out(values.size(), 0.0);
  // Simpson increments over even pairs of panels; a trailing odd panel is
  // closed with the trapezoid.
  for (std::size_t m = 2; m < values.size(); m += 2)
    out[m] = out[m - 2] + h / 3.0 * (values[m - 2] + 4.0 * values[m - 1] + values[m]);
  for (std::size_t m = 1; m < values.size(); m += 2)
    out[m] = out[m - 1] + 0.5 * h * (values[m - 1] + values[m]);
  return out;
}

std::vector<double> double_running_integral(std::span<const double> values, double h) {
  const std::vector<double> inner = running_integral(values, h);
  return running_integral(std::span<const double>(inner), h);
}

const GaussLegendre4& gauss_legendre4() {
  static const GaussLegendre4 rule = {
      {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526},
      {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538}};
  return rule;
}

}  // namespace nls
