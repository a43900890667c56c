#include "nlsconserve/observables.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "nlsconserve/spectral.hpp"

namespace nls {

double charge(const ComplexField& u) { return norm_sq(u); }

double energy(const ComplexField& u, const PowerNonlinearity& nl) {
  return 0.5 * norm_sq(gradient(u)) + potential_energy(nl, u);
}

std::vector<double> momentum(const ComplexField& u) {
  // P_j = Im integral conj(u) d_j u dx = Im (d_j u, u).
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(u.grid.dim));
  for (int axis = 0; axis < u.grid.dim; ++axis)
    p.push_back(std::imag(inner_product(partial_derivative(u, axis), u)));
  return p;
}

namespace {

void warn_boundary(const ComplexField& u, std::vector<std::string>* warnings) {
  if (!warnings) return;
  const double frac = boundary_mass_fraction(u);
  if (frac > kBoundaryMassThreshold)
    warnings->push_back("boundary_mass: fraction " + std::to_string(frac) +
                        " exceeds threshold; weighted observables are unreliable");
}

}  // namespace

double j_norm_sq(const ComplexField& u, double t, std::vector<std::string>* warnings) {
  warn_boundary(u, warnings);
  const VectorField j = galilean(u, t);
  return norm_sq(j);
}

double x_norm_sq(const ComplexField& u, std::vector<std::string>* warnings) {
  warn_boundary(u, warnings);
  return norm_sq(weight_x(u));
}

double cross_term(const ComplexField& u, std::vector<std::string>* warnings) {
  warn_boundary(u, warnings);
  const VectorField xu = weight_x(u);
  double total = 0.0;
  for (int axis = 0; axis < u.grid.dim; ++axis)
    total += std::imag(inner_product(partial_derivative(u, axis),
                                     xu.components[static_cast<std::size_t>(axis)]));
  return total;
}

ObservableRecord observe(const ComplexField& u, const PowerNonlinearity& nl, double t) {
  ObservableRecord rec;
  rec.t = t;
  rec.charge = norm_sq(u);
  rec.potential = potential_energy(nl, u);
  rec.w_integral = nls::w_integral(nl, u);
  rec.boundary_mass = boundary_mass_fraction(u);

  const VectorField grad = gradient(u);
  rec.grad_norm_sq = norm_sq(grad);
  rec.energy = 0.5 * rec.grad_norm_sq + rec.potential;
  rec.momentum.reserve(static_cast<std::size_t>(u.grid.dim));
  for (int axis = 0; axis < u.grid.dim; ++axis)
    rec.momentum.push_back(
        std::imag(inner_product(grad.components[static_cast<std::size_t>(axis)], u)));

  const VectorField xu = weight_x(u);
  rec.x_norm_sq = norm_sq(xu);
  double cross = 0.0;
  double jnorm = 0.0;
  for (int axis = 0; axis < u.grid.dim; ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    cross += std::imag(inner_product(grad.components[a], xu.components[a]));
    ComplexField j_comp = xu.components[a];
    add_scaled(j_comp, Complex(0.0, t), grad.components[a]);
    jnorm += norm_sq(j_comp);
  }
  rec.cross_term = cross;
  rec.j_norm_sq = jnorm;
  return rec;
}

void fill_observable_log(Trajectory& traj, const PowerNonlinearity& nl) {
  traj.observable_log.clear();
  traj.observable_log.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i)
    traj.observable_log.push_back(observe(traj.states[i], nl, traj.times[i]));
}

std::vector<double> accumulate_series(std::span<const double> values, double h,
                                      AccumulateKernel kernel) {
  if (values.size() < 3)
    throw std::invalid_argument("accumulate: need at least 3 stored samples");
  switch (kernel) {
    case AccumulateKernel::one:
      return running_integral(values, h);
    case AccumulateKernel::s: {
      std::vector<double> weighted(values.size());
      for (std::size_t m = 0; m < values.size(); ++m)
        weighted[m] = static_cast<double>(m) * h * values[m];
      return running_integral(std::span<const double>(weighted), h);
    }
    case AccumulateKernel::iterated:
      return double_running_integral(values, h);
  }
  throw std::invalid_argument("accumulate: unknown kernel");
}

std::vector<double> accumulate(const Trajectory& traj, AccumulateKernel kernel) {
  if (traj.observable_log.empty())
    throw std::logic_error("accumulate: observable_log is empty; call fill_observable_log");
  std::vector<double> w(traj.observable_log.size());
  for (std::size_t m = 0; m < w.size(); ++m) w[m] = traj.observable_log[m].w_integral;
  return accumulate_series(std::span<const double>(w), traj.store_dt(), kernel);
}

void write_observables_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.observable_log.empty())
    throw std::logic_error("write_observables_csv: observable_log is empty");
  const int d = traj.grid.dim;
  out << "t,charge,energy,px";
  if (d >= 2) out << ",py";
  if (d >= 3) out << ",pz";
  out << ",potential,w_integral,grad_norm_sq,j_norm_sq,x_norm_sq,cross_term\n";
  char buf[64];
  auto emit = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (const ObservableRecord& r : traj.observable_log) {
    emit(r.t);
    out << ',';
    emit(r.charge);
    out << ',';
    emit(r.energy);
    for (int axis = 0; axis < d; ++axis) {
      out << ',';
      emit(r.momentum[static_cast<std::size_t>(axis)]);
    }
    out << ',';
    emit(r.potential);
    out << ',';
    emit(r.w_integral);
    out << ',';
    emit(r.grad_norm_sq);
    out << ',';
    emit(r.j_norm_sq);
    out << ',';
    emit(r.x_norm_sq);
    out << ',';
    emit(r.cross_term);
    out << '\n';
  }
}

void write_observables_csv_file(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_observables_csv_file: cannot open " + path);
  write_observables_csv(out, traj);
}

}  // namespace nls
