#include "nlsconserve/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nls {

namespace {

// FFTW plan creation is not thread safe; execution on distinct arrays is.
// Plans are cached per (dim, n, direction) and created with FFTW_ESTIMATE,
// which is deterministic and leaves the input untouched.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& grid, int sign) {
    const Key key{grid.dim, grid.n, sign};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::vector<fftw_complex> scratch_in(grid.num_points());
    std::vector<fftw_complex> scratch_out(grid.num_points());
    int dims[3] = {grid.n, grid.n, grid.n};
    fftw_plan plan = fftw_plan_dft(grid.dim, dims, scratch_in.data(), scratch_out.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw_plan_dft failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  struct Key {
    int dim;
    int n;
    int sign;
    bool operator<(const Key& o) const {
      if (dim != o.dim) return dim < o.dim;
      if (n != o.n) return n < o.n;
      return sign < o.sign;
    }
  };

  PlanCache() = default;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

std::vector<Complex> transform(const Grid& grid, const std::vector<Complex>& in, int sign) {
  std::vector<Complex> out(in.size());
  fftw_plan plan = PlanCache::instance().get(grid, sign);
  // fftw_complex and std::complex<double> share layout.
  auto* in_raw = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* out_raw = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, in_raw, out_raw);
  return out;
}

// Applies a diagonal Fourier multiplier m(xi) given per-axis mode tables.
template <typename Multiplier>
ComplexField apply_multiplier(const ComplexField& u, Multiplier&& m) {
  std::vector<Complex> coeffs = transform(u.grid, u.values, FFTW_FORWARD);
  const Grid& g = u.grid;
  const std::size_t total = g.num_points();
  const auto nsz = static_cast<std::size_t>(g.n);
  if (g.dim == 1) {
    for (std::size_t i = 0; i < total; ++i) coeffs[i] *= m(g.freqs[i], 0.0, 0.0);
  } else if (g.dim == 2) {
    std::size_t i = 0;
    for (std::size_t a = 0; a < nsz; ++a)
      for (std::size_t b = 0; b < nsz; ++b, ++i) coeffs[i] *= m(g.freqs[a], g.freqs[b], 0.0);
  } else {
    std::size_t i = 0;
    for (std::size_t a = 0; a < nsz; ++a)
      for (std::size_t b = 0; b < nsz; ++b)
        for (std::size_t c = 0; c < nsz; ++c, ++i)
          coeffs[i] *= m(g.freqs[a], g.freqs[b], g.freqs[c]);
  }
  ComplexField out;
  out.grid = u.grid;
  out.values = transform(u.grid, coeffs, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(total);
  for (Complex& z : out.values) z *= inv;
  return out;
}

}  // namespace

std::vector<Complex> dft_coefficients(const ComplexField& u) {
  return transform(u.grid, u.values, FFTW_FORWARD);
}

ComplexField field_from_coefficients(const Grid& grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.num_points())
    throw std::invalid_argument("field_from_coefficients: size mismatch");
  ComplexField out;
  out.grid = grid;
  out.values = transform(grid, coeffs, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(grid.num_points());
  for (Complex& z : out.values) z *= inv;
  return out;
}

ComplexField partial_derivative(const ComplexField& u, int axis) {
  if (axis < 0 || axis >= u.grid.dim)
    throw std::invalid_argument("partial_derivative: axis out of range");
  const Complex i_unit(0.0, 1.0);
  return apply_multiplier(u, [axis, i_unit](double xa, double xb, double xc) {
    const double xi = axis == 0 ? xa : (axis == 1 ? xb : xc);
    return i_unit * xi;
  });
}

VectorField gradient(const ComplexField& u) {
  VectorField out;
  out.components.reserve(static_cast<std::size_t>(u.grid.dim));
  for (int axis = 0; axis < u.grid.dim; ++axis)
    out.components.push_back(partial_derivative(u, axis));
  return out;
}

ComplexField laplacian(const ComplexField& u) {
  return apply_multiplier(u, [](double xa, double xb, double xc) {
    return Complex(-(xa * xa + xb * xb + xc * xc), 0.0);
  });
}

ComplexField free_propagate(const ComplexField& u, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("free_propagate: t must be finite");
  return apply_multiplier(u, [t](double xa, double xb, double xc) {
    const double phase = -0.5 * t * (xa * xa + xb * xb + xc * xc);
    return Complex(std::cos(phase), std::sin(phase));
  });
}

VectorField weight_x(const ComplexField& u, std::vector<std::string>* warnings) {
  if (warnings) {
    const double frac = boundary_mass_fraction(u);
    if (frac > kBoundaryMassThreshold)
      warnings->push_back("boundary_mass: outer-shell mass fraction " + std::to_string(frac) +
                          " exceeds threshold; position weight is unreliable");
  }
  VectorField out = zero_vector_field(u.grid);
  for (int axis = 0; axis < u.grid.dim; ++axis) {
    ComplexField& comp = out.components[static_cast<std::size_t>(axis)];
    for (std::size_t i = 0; i < u.values.size(); ++i)
      comp.values[i] = u.grid.coord(i, axis) * u.values[i];
  }
  return out;
}

VectorField galilean(const ComplexField& u, double t, std::vector<std::string>* warnings) {
  VectorField out = weight_x(u, warnings);
  if (t != 0.0) {
    const Complex it(0.0, t);
    for (int axis = 0; axis < u.grid.dim; ++axis)
      add_scaled(out.components[static_cast<std::size_t>(axis)], it,
                 partial_derivative(u, axis));
  }
  return out;
}

ComplexField dealias_two_thirds(const ComplexField& u) {
  const Grid& g = u.grid;
  const double cutoff = (2.0 * std::numbers::pi / g.length) * (g.n / 3.0);
  return apply_multiplier(u, [cutoff](double xa, double xb, double xc) {
    const bool keep = std::abs(xa) <= cutoff && std::abs(xb) <= cutoff && std::abs(xc) <= cutoff;
    return Complex(keep ? 1.0 : 0.0, 0.0);
  });
}

ComplexField sample_dilated(const ComplexField& u, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("sample_dilated: lambda must be positive and finite");
  const Grid& g = u.grid;
  const auto nsz = static_cast<std::size_t>(g.n);

  // Interpolant: u(y) = (1/n^d) sum_k c_k exp(i xi_k (y - x_first)) per axis,
  // with x_first = -L/2 (coefficients come out of the unnormalized DFT).
  // Evaluation at y_j = lambda * x_j is a dense n-by-n matrix per axis,
  // applied along each axis of the coefficient tensor.
  std::vector<Complex> eval(nsz * nsz);
  const double x_first = g.coords.front();
  for (std::size_t j = 0; j < nsz; ++j) {
    const double y = lambda * g.coords[j];
    for (std::size_t k = 0; k < nsz; ++k) {
      const double phase = g.freqs[k] * (y - x_first);
      eval[j * nsz + k] = Complex(std::cos(phase), std::sin(phase)) / static_cast<double>(g.n);
    }
  }

  std::vector<Complex> data = dft_coefficients(u);
  // Contract the evaluation matrix with each axis in turn.
  std::size_t outer = 1, inner = g.num_points() / nsz;
  std::vector<Complex> next(data.size());
  for (int axis = 0; axis < g.dim; ++axis) {
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        for (std::size_t j = 0; j < nsz; ++j) {
          Complex acc(0.0, 0.0);
          for (std::size_t k = 0; k < nsz; ++k)
            acc += eval[j * nsz + k] * data[(o * nsz + k) * inner + in];
          next[(o * nsz + j) * inner + in] = acc;
        }
      }
    }
    data.swap(next);
    outer *= nsz;
    inner /= nsz;
  }
  ComplexField out;
  out.grid = g;
  out.values = std::move(data);
  return out;
}

}  // namespace nls
