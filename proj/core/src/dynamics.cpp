#include "nlsconserve/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nls {

const char* to_string(Scheme scheme) {
  return scheme == Scheme::strang ? "strang" : "picard";
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!std::isfinite(t_final) || t_final < 0.0)
    throw std::invalid_argument("SolverConfig: t_final must be finite and >= 0");
  if (t_final > 0.0 && dt > t_final * (1.0 + 1e-12))
    throw std::invalid_argument("SolverConfig: dt exceeds t_final");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol must be > 0");
  if (picard_max_iter < 1)
    throw std::invalid_argument("SolverConfig: picard_max_iter must be >= 1");
  if (store_every < 1) throw std::invalid_argument("SolverConfig: store_every must be >= 1");
  const double steps = t_final / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("SolverConfig: t_final must be an integer multiple of dt");
  if (step_count() % store_every != 0)
    throw std::invalid_argument("SolverConfig: step count must be divisible by store_every");
}

int SolverConfig::step_count() const { return static_cast<int>(std::llround(t_final / dt)); }

ComplexField strang_step(const ComplexField& u, const PowerNonlinearity& nl, double dt,
                         bool dealias) {
  ComplexField half = free_propagate(u, 0.5 * dt);
  // Exact nonlinear flow: phase rotation by -dt*lambda*|u|^(p-1).
  for (Complex& z : half.values) {
    const double r = std::abs(z);
    if (r == 0.0) continue;
    const double phase = -dt * nl.lambda * std::exp((nl.p - 1.0) * std::log(r));
    z *= Complex(std::cos(phase), std::sin(phase));
  }
  if (dealias) half = dealias_two_thirds(half);
  return free_propagate(half, 0.5 * dt);
}

namespace {

Trajectory make_trajectory_shell(const ComplexField& u0, const SolverConfig& cfg) {
  Trajectory traj;
  traj.grid = u0.grid;
  traj.dt = cfg.dt;
  traj.store_every = cfg.store_every;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  return traj;
}

Trajectory evolve_strang(const ComplexField& u0, const PowerNonlinearity& nl,
                         const SolverConfig& cfg) {
  Trajectory traj = make_trajectory_shell(u0, cfg);
  const int steps = cfg.step_count();
  ComplexField u = u0;
  for (int k = 1; k <= steps; ++k) {
    u = strang_step(u, nl, cfg.dt, cfg.dealias);
    if (!all_finite(u)) {
      traj.blowup_time = k * cfg.dt;
      return traj;
    }
    if (k % cfg.store_every == 0) {
      traj.times.push_back(k * cfg.dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

}  // namespace

Trajectory evolve(const ComplexField& u0, const PowerNonlinearity& nl, const SolverConfig& cfg) {
  cfg.validate();
  if (!all_finite(u0)) throw std::invalid_argument("evolve: initial state contains NaN/Inf");
  if (cfg.scheme == Scheme::picard) {
    SolverConfig sub = cfg;
    return picard_solve(u0, nl, cfg.t_final, sub);
  }
  return evolve_strang(u0, nl, cfg);
}

namespace {

// Shared body; `strict_parity` enforces the odd-sample-count contract for the
// public entry point, while the Picard iteration integrates to every node and
// relies on the 3/8 closure of composite_weights for even counts.
ComplexField duhamel_uniform(std::span<const ComplexField> g, double t, QuadRule rule,
                             bool strict_parity) {
  if (g.size() < 2) throw std::invalid_argument("duhamel_integral: need at least 2 samples");
  if (rule == QuadRule::gauss4)
    throw std::invalid_argument(
        "duhamel_integral: gauss4 needs node sampling; use duhamel_integral_gauss4");
  if (strict_parity && rule == QuadRule::simpson && g.size() % 2 == 0 && g.size() > 2)
    throw std::invalid_argument(
        "duhamel_integral: simpson requires an odd uniform sample count");
  const int panels = static_cast<int>(g.size()) - 1;
  const double h = t / panels;
  const std::vector<double> w = composite_weights(panels, h, rule);
  ComplexField acc = zero_field(g[0].grid);
  for (std::size_t m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    ComplexField term = free_propagate(g[m], t - static_cast<double>(m) * h);
    add_scaled(acc, Complex(w[m], 0.0), term);
  }
  scale(acc, Complex(0.0, -1.0));
  return acc;
}

}  // namespace

ComplexField duhamel_integral(std::span<const ComplexField> g, double t, QuadRule rule) {
  return duhamel_uniform(g, t, rule, /*strict_parity=*/true);
}

ComplexField duhamel_integral_closed(std::span<const ComplexField> g, double t, QuadRule rule) {
  return duhamel_uniform(g, t, rule, /*strict_parity=*/false);
}

Trajectory picard_solve(const ComplexField& u0, const PowerNonlinearity& nl, double T,
                        const SolverConfig& cfg, std::vector<double>* difference_log) {
  if (!(T > 0.0)) throw std::invalid_argument("picard_solve: horizon T must be > 0");
  if (cfg.quad == QuadRule::gauss4)
    throw std::invalid_argument("picard_solve: gauss4 is reserved for oracle quadrature; "
                                "use trapezoid or simpson");
  const int samples = static_cast<int>(std::llround(T / cfg.dt)) + 1;
  if (samples < 3) throw std::invalid_argument("picard_solve: fewer than 3 time samples");
  if (std::abs((samples - 1) * cfg.dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("picard_solve: T must be an integer multiple of dt");
  const double h = cfg.dt;
  const double u0_norm = l2_norm(u0);

  // Free evolution seeds the iteration.
  std::vector<ComplexField> current;
  current.reserve(static_cast<std::size_t>(samples));
  for (int m = 0; m < samples; ++m) current.push_back(free_propagate(u0, m * h));

  if (u0_norm > 0.0) {
    double prev_diff = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    bool converged = false;
    for (int iter = 0; iter < cfg.picard_max_iter; ++iter) {
      // f(u^{(k)}) at every sample, then one Duhamel integral per node.
      std::vector<ComplexField> rhs;
      rhs.reserve(current.size());
      for (const ComplexField& state : current) rhs.push_back(nonlinear_term(nl, state));

      std::vector<ComplexField> next;
      next.reserve(current.size());
      next.push_back(u0);
      for (int m = 1; m < samples; ++m) {
        ComplexField v = free_propagate(u0, m * h);
        const std::span<const ComplexField> head(rhs.data(), static_cast<std::size_t>(m) + 1);
        add_scaled(v, Complex(1.0, 0.0),
                   duhamel_uniform(head, m * h, cfg.quad, /*strict_parity=*/false));
        next.push_back(std::move(v));
      }

      double diff = 0.0;
      for (int m = 0; m < samples; ++m)
        diff = std::max(diff, l2_norm(subtract(next[static_cast<std::size_t>(m)],
                                               current[static_cast<std::size_t>(m)])));
      diff /= u0_norm;
      if (difference_log) difference_log->push_back(diff);
      current.swap(next);

      if (diff <= cfg.picard_tol) {
        converged = true;
        break;
      }
      if (diff > prev_diff) {
        if (++growth_streak >= 3)
          throw PicardNonContraction(
              "picard_solve: successive differences grew 3 times in a row; shrink T");
      } else {
        growth_streak = 0;
      }
      prev_diff = diff;
    }
    if (!converged)
      throw PicardMaxIterations("picard_solve: no convergence within " +
                                std::to_string(cfg.picard_max_iter) + " iterations");
  }

  Trajectory traj;
  traj.grid = u0.grid;
  traj.dt = cfg.dt;
  traj.store_every = cfg.store_every;
  for (int m = 0; m < samples; ++m) {
    if (m % cfg.store_every != 0) continue;
    traj.times.push_back(m * h);
    traj.states.push_back(std::move(current[static_cast<std::size_t>(m)]));
  }
  return traj;
}

ComplexField time_derivative(const ComplexField& u, const PowerNonlinearity& nl) {
  ComplexField out = laplacian(u);
  scale(out, Complex(0.5, 0.0));
  add_scaled(out, Complex(-1.0, 0.0), nonlinear_term(nl, u));
  scale(out, Complex(0.0, 1.0));
  return out;
}

}  // namespace nls
