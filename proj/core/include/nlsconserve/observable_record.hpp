#pragma once

#include <vector>

namespace nls {

/// Scalar diagnostics of one state at one stored time. Every identity check
/// reads these instead of recomputing fields.
struct ObservableRecord {
  double t = 0.0;
  double charge = 0.0;                // ||u||_L2^2
  double energy = 0.0;                // grad_norm_sq/2 + potential
  std::vector<double> momentum;       // Im integral conj(u) * grad u, per axis
  double potential = 0.0;             // integral of V(u)
  double w_integral = 0.0;            // integral of W(u)
  double grad_norm_sq = 0.0;          // ||grad u||^2
  double j_norm_sq = 0.0;             // ||J(t)u||^2 = sum_j ||x_j u + i t d_j u||^2
  double x_norm_sq = 0.0;             // ||x u||^2
  double cross_term = 0.0;            // sum_j Im (d_j u, x_j u), conjugation on second slot
  double boundary_mass = 0.0;         // outer-shell mass fraction (diagnostic)
};

}  // namespace nls
