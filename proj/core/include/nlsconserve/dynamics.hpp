#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsconserve/field.hpp"
#include "nlsconserve/nonlinearity.hpp"
#include "nlsconserve/observable_record.hpp"
#include "nlsconserve/quadrature.hpp"
#include "nlsconserve/spectral.hpp"

namespace nls {

enum class Scheme { strang, picard };

const char* to_string(Scheme scheme);

struct SolverConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  Scheme scheme = Scheme::strang;
  int picard_max_iter = 50;
  double picard_tol = 1e-12;  // relative L2 on successive iterates
  QuadRule quad = QuadRule::simpson;
  int store_every = 1;
  bool dealias = false;  // 2/3-rule truncation after the nonlinear substep

  /// Throws std::invalid_argument on violated invariants (dt <= t_final for
  /// positive horizons, positive tolerances, t_final an integer number of
  /// steps, step count divisible by store_every).
  void validate() const;

  int step_count() const;  // round(t_final/dt)
};

/// Time-ordered record of one evolution. States are stored every
/// `store_every` steps starting at t = 0; observable_log is filled by
/// fill_observable_log (observables module) and is empty until then.
struct Trajectory {
  Grid grid;
  double dt = 0.0;
  int store_every = 1;
  std::vector<double> times;
  std::vector<ComplexField> states;
  std::vector<ObservableRecord> observable_log;
  std::optional<double> blowup_time;  // set when NaN/Inf appeared; states end earlier

  double store_dt() const { return dt * store_every; }
  const ComplexField& initial_state() const { return states.front(); }
};

/// One Strang step U(dt/2) N(dt) U(dt/2). The nonlinear flow is exact:
/// |u| is invariant under i u_t = f(u), so N(dt)u = u*exp(-i*dt*lambda*|u|^(p-1)).
/// Charge is conserved to roundoff per step. Throws on non-finite input.
ComplexField strang_step(const ComplexField& u, const PowerNonlinearity& nl, double dt,
                         bool dealias = false);

/// Repeated strang_step (or a Picard segment, per cfg.scheme) through
/// cfg.t_final. On NaN/Inf the trajectory is returned truncated at the last
/// finite state with blowup_time set; it is not an exception because the
/// partial record is the result of interest.
Trajectory evolve(const ComplexField& u0, const PowerNonlinearity& nl, const SolverConfig& cfg);

/// -i * integral_0^t U(t-s) g(s) ds by composite quadrature on uniform
/// samples g(s_m), s_m = m*t/(samples-1), endpoints included. Simpson
/// requires an odd sample count >= 3 or falls back per composite_weights;
/// gauss4 is node-based and rejected here (see duhamel_integral_gauss4).
ComplexField duhamel_integral(std::span<const ComplexField> g, double t, QuadRule rule);

/// As duhamel_integral but permits even Simpson sample counts by closing the
/// final three panels with a 3/8 segment (4th order preserved). Needed when
/// integrating to every node of a uniform grid.
ComplexField duhamel_integral_closed(std::span<const ComplexField> g, double t, QuadRule rule);

/// Same integral with g evaluated at composite 4-point Gauss-Legendre nodes
/// (`panels` panels on [0, t]); order 8, used as a quadrature oracle.
template <typename Sampler>
ComplexField duhamel_integral_gauss4(Sampler&& g, const Grid& grid, double t, int panels);

/// Fixed-point iteration on u(t) = U(t)u0 - i int_0^t U(t-s) f(u(s)) ds over
/// [0, T], sampled at cfg.dt. Iterates until the successive-difference norm
/// drops below cfg.picard_tol * ||u0||. Throws PicardNonContraction when the
/// differences grow three times in a row (shrink T), PicardMaxIterations
/// when cfg.picard_max_iter is exhausted.
Trajectory picard_solve(const ComplexField& u0, const PowerNonlinearity& nl, double T,
                        const SolverConfig& cfg,
                        std::vector<double>* difference_log = nullptr);

struct PicardNonContraction : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PicardMaxIterations : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Right-hand side of the evolution read as u_t = i*(Laplacian(u)/2 - f(u)).
ComplexField time_derivative(const ComplexField& u, const PowerNonlinearity& nl);

// --- template implementation ---

template <typename Sampler>
ComplexField duhamel_integral_gauss4(Sampler&& g, const Grid& grid, double t, int panels) {
  const GaussLegendre4& rule = gauss_legendre4();
  ComplexField acc = zero_field(grid);
  const double h = t / panels;
  for (int panel = 0; panel < panels; ++panel) {
    const double a = panel * h;
    for (int q = 0; q < 4; ++q) {
      const double s = a + 0.5 * h * (rule.nodes[static_cast<std::size_t>(q)] + 1.0);
      const double w = 0.5 * h * rule.weights[static_cast<std::size_t>(q)];
      ComplexField term = free_propagate(g(s), t - s);
      add_scaled(acc, Complex(w, 0.0), term);
    }
  }
  scale(acc, Complex(0.0, -1.0));
  return acc;
}

}  // namespace nls
