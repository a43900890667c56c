#include "nlsconserve/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <sstream>

namespace nls {

ComplexField zero_field(const Grid& grid) {
  ComplexField u;
  u.grid = grid;
  u.values.assign(grid.num_points(), Complex(0.0, 0.0));
  return u;
}

VectorField zero_vector_field(const Grid& grid) {
  VectorField w;
  w.components.assign(static_cast<std::size_t>(grid.dim), zero_field(grid));
  return w;
}

bool all_finite(const ComplexField& u) {
  for (const Complex& z : u.values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> xs) {
  if (xs.size() <= 32) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum_impl(xs.first(half)) + pairwise_sum_impl(xs.subspan(half));
}

void require_same_grid(const ComplexField& u, const ComplexField& v, const char* what) {
  if (!u.grid.compatible_with(v.grid))
    throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_impl(xs); }
Complex pairwise_sum(std::span<const Complex> xs) { return pairwise_sum_impl(xs); }

Complex inner_product(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u, v, "inner_product");
  std::vector<Complex> terms(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) terms[i] = u.values[i] * std::conj(v.values[i]);
  const double cell = std::pow(u.grid.spacing, u.grid.dim);
  return cell * pairwise_sum(std::span<const Complex>(terms));
}

double norm_sq(const ComplexField& u) {
  std::vector<double> terms(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) terms[i] = std::norm(u.values[i]);
  const double cell = std::pow(u.grid.spacing, u.grid.dim);
  return cell * pairwise_sum(std::span<const double>(terms));
}

double l2_norm(const ComplexField& u) { return std::sqrt(norm_sq(u)); }

double norm_sq(const VectorField& w) {
  double total = 0.0;
  for (const auto& c : w.components) total += norm_sq(c);
  return total;
}

double boundary_mass_fraction(const ComplexField& u) {
  const Grid& g = u.grid;
  const double edge = 0.45 * g.length;
  std::vector<double> shell(u.values.size(), 0.0), all(u.values.size(), 0.0);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double m = std::norm(u.values[i]);
    all[i] = m;
    for (int a = 0; a < g.dim; ++a) {
      if (std::abs(g.coord(i, a)) >= edge) {
        shell[i] = m;
        break;
      }
    }
  }
  const double total = pairwise_sum(std::span<const double>(all));
  if (total == 0.0) return 0.0;
  return pairwise_sum(std::span<const double>(shell)) / total;
}

void add_scaled(ComplexField& u, Complex a, const ComplexField& v) {
  require_same_grid(u, v, "add_scaled");
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += a * v.values[i];
}

void scale(ComplexField& u, Complex a) {
  for (Complex& z : u.values) z *= a;
}

ComplexField subtract(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u, v, "subtract");
  ComplexField out = u;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= v.values[i];
  return out;
}

double max_abs_diff(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u, v, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    m = std::max(m, std::abs(u.values[i] - v.values[i]));
  return m;
}

void write_field(std::ostream& out, const ComplexField& u) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "NLSF1 d=%d n=%d L=%.17g\n", u.grid.dim, u.grid.n,
                u.grid.length);
  out << buf;
  for (const Complex& z : u.values) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", z.real(), z.imag());
    out << buf;
  }
}

void write_field_file(const std::string& path, const ComplexField& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_file: cannot open " + path);
  write_field(out, u);
}

ComplexField read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("read_field: empty stream");
  int d = 0, n = 0;
  double length = 0.0;
  if (std::sscanf(header.c_str(), "NLSF1 d=%d n=%d L=%lf", &d, &n, &length) != 3)
    throw std::runtime_error("read_field: malformed NLSF1 header: " + header);
  ComplexField u = zero_field(make_grid(d, n, length));
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im))
      throw std::runtime_error("read_field: truncated data at entry " + std::to_string(i));
    if (!std::isfinite(re) || !std::isfinite(im))
      throw std::runtime_error("read_field: non-finite entry at index " + std::to_string(i));
    u.values[i] = Complex(re, im);
  }
  return u;
}

ComplexField read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_field_file: cannot open " + path);
  return read_field(in);
}

}  // namespace nls
