#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlsconserve/dynamics.hpp"
#include "nlsconserve/field.hpp"
#include "nlsconserve/nonlinearity.hpp"
#include "nlsconserve/observable_record.hpp"

namespace nls {

double charge(const ComplexField& u);                                  // ||u||^2
double energy(const ComplexField& u, const PowerNonlinearity& nl);     // grad^2/2 + V
std::vector<double> momentum(const ComplexField& u);                   // Im (d_j u, u) per axis

/// ||J(t)u||^2, ||x u||^2 and sum_j Im (d_j u, x_j u). All three assume a
/// boundary-negligible field; warnings are appended otherwise.
double j_norm_sq(const ComplexField& u, double t, std::vector<std::string>* warnings = nullptr);
double x_norm_sq(const ComplexField& u, std::vector<std::string>* warnings = nullptr);
double cross_term(const ComplexField& u, std::vector<std::string>* warnings = nullptr);

/// All scalars of one state at time t.
ObservableRecord observe(const ComplexField& u, const PowerNonlinearity& nl, double t);

/// Fills traj.observable_log with one record per stored state.
void fill_observable_log(Trajectory& traj, const PowerNonlinearity& nl);

enum class AccumulateKernel { one, s, iterated };

/// Running time integrals of the W integral over a logged trajectory:
///   one       -> int_0^t W ds
///   s         -> int_0^t s*W ds
///   iterated  -> int_0^t int_0^s W dtau ds (two composed running integrals)
/// Simpson with trapezoid closure; requires >= 3 stored samples.
std::vector<double> accumulate(const Trajectory& traj, AccumulateKernel kernel);

/// Same rule applied to an arbitrary uniformly sampled scalar series.
std::vector<double> accumulate_series(std::span<const double> values, double h,
                                      AccumulateKernel kernel);

/// CSV time series with the exact header
///   t,charge,energy,px[,py[,pz]],potential,w_integral,grad_norm_sq,j_norm_sq,x_norm_sq,cross_term
void write_observables_csv(std::ostream& out, const Trajectory& traj);
void write_observables_csv_file(const std::string& path, const Trajectory& traj);

}  // namespace nls
