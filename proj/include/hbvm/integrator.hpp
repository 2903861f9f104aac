#ifndef HBVM_INTEGRATOR_HPP
#define HBVM_INTEGRATOR_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbvm/blended.hpp"
#include "hbvm/hamiltonian.hpp"
#include "hbvm/partition.hpp"

namespace hbvm {

/// A ready-to-step HBVM(k,s): the partitioned tableau and a solver
/// configuration whose gamma has been resolved.
struct HbvmMethod {
  StagePartition partition;
  BlendedConfig config;

  int k() const noexcept { return partition.tableau.k; }
  int s() const noexcept { return partition.tableau.s; }
};

/// Builds HBVM(k,s) on k Gauss nodes. With the rule-of-thumb selection the
/// gap k - s must be even.
HbvmMethod make_method(int k, int s, BlendedConfig cfg = {}, Selection selection = Selection::RuleOfThumb);

struct StepResult {
  Vector state;
  BlendedStats stats;
};

/// y1 = y0 + h sum_l omega_l f(Y_l) over all k stages, the silent ones
/// rebuilt from the converged fundamental block.
StepResult advance_step(const StagePartition& part, const HamiltonianSystem& system, std::span<const double> y0,
                        double h, const BlendedConfig& cfg = {});

struct StepFailure {
  std::size_t step = 0;
  double time = 0.0;
  std::string reason;
};

struct IntegrationResult {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> energy;
  /// Blended sweeps per step; one entry per completed step.
  std::vector<int> sweeps;
  std::vector<StepFailure> failures;

  bool complete() const noexcept { return failures.empty(); }
  std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
  double max_energy_error() const;
  /// max |H_n - H_0| / |H_0|, or the absolute error when H_0 = 0.
  double max_relative_energy_error() const;
};

/// n_steps fixed steps of size h (negative h integrates backwards). A failing
/// step is recorded and ends the run with the states computed so far.
IntegrationResult integrate_steps(const HbvmMethod& method, const HamiltonianSystem& system, const Vector& y0, double h,
                                  std::size_t n_steps);

/// floor(t_end / h) steps of HBVM(k,s) with rule-of-thumb fundamental nodes.
IntegrationResult integrate(const HamiltonianSystem& system, const Vector& y0, double t_end, double h, int k, int s,
                            const BlendedConfig& cfg = {});

struct OrderStudy {
  std::vector<double> step_sizes;
  std::vector<double> errors;
  /// Least-squares slope of log(error) against log(h); NaN if unmeasurable.
  double slope = 0.0;
  bool measurable = true;
};

using ExactSolution = std::function<Vector(double)>;

/// Integrates to t_end with h0, h0/2, ... (`levels` >= 4 values) and measures
/// the error at t_end against `exact`, or against the same method run with
/// the finest step divided by 64 when no exact solution is supplied. An error
/// below 1e-13 at the coarsest level marks the study unmeasurable.
OrderStudy observed_order(const HamiltonianSystem& system, const Vector& y0, double t_end, int k, int s, double h0,
                          int levels, const BlendedConfig& cfg = {}, const ExactSolution& exact = {});

/// ||y_2n - y0||_inf after n steps with h followed by n steps with -h.
double reversibility_check(const HamiltonianSystem& system, const Vector& y0, std::size_t n_steps, double h, int k,
                           int s, const BlendedConfig& cfg = {});

}  // namespace hbvm

#endif  // HBVM_INTEGRATOR_HPP
