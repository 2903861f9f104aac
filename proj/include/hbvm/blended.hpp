#ifndef HBVM_BLENDED_HPP
#define HBVM_BLENDED_HPP

// Blended iteration for the reduced HBVM(k,s) stage equations
//
//   F(y1) = y1 - e (x) y0 - h [B1 f(y1) + B2 f(u_hat (x) y0 + A1 y1)] = 0,
//
// plus the linear convergence analysis on y' = lambda y that fixes the free
// parameter gamma. Only Phi = I - h gamma J0 (the size of the ODE) is ever
// factored; theta = I_s (x) Phi^{-1} is applied stage by stage.

#include <optional>
#include <span>
#include <vector>

#include "hbvm/hamiltonian.hpp"
#include "hbvm/linalg.hpp"
#include "hbvm/partition.hpp"

namespace hbvm {

enum class BlendedMode {
  /// Simplified Newton outer loop, each correction obtained by the linear
  /// blended iteration on the frozen system.
  Linearized,
  /// One blended sweep per fresh residual evaluation.
  Nonlinear,
};

struct BlendedConfig {
  /// Unset means the optimal value |mu_min| over eig(C).
  std::optional<double> gamma;
  int max_outer = 50;
  int max_inner = 50;
  double rtol = 1e-12;
  double atol = 1e-14;
  BlendedMode mode = BlendedMode::Nonlinear;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

struct BlendedStats {
  /// Blended sweeps performed (inner iterations summed over outer ones).
  int sweeps = 0;
  /// Residual evaluations used by the stopping test.
  int residual_evaluations = 0;
  /// Simplified Newton steps; equals sweeps in nonlinear mode.
  int outer_iterations = 0;
  double residual_norm = 0.0;
  double gamma = 0.0;
};

struct BlendedResult {
  StageBlock y1;  // s x dim fundamental stages
  BlendedStats stats;
};

/// One step's worth of solver state: y0, h, gamma and the factored Phi.
class BlendedSolver {
 public:
  /// The field (and the partition) must outlive the solver. Throws
  /// StepRejected when Phi is singular.
  BlendedSolver(const StagePartition& part, VectorField field, std::span<const double> y0, double h,
                const BlendedConfig& cfg);

  double gamma() const noexcept { return gamma_; }
  const Matrix& jacobian() const noexcept { return j0_; }

  StageBlock initial_guess() const;

  /// F(y1) of the reduced problem.
  StageBlock residual(const StageBlock& y1) const;

  /// theta (x) applied to every stage: rows solved against Phi.
  StageBlock apply_theta(const StageBlock& block) const;

  /// The blended matrix M applied to a correction block.
  StageBlock apply_M(const StageBlock& delta) const;

  /// The nonlinear update y1 + theta psi(y1), psi = theta psi1 + (I-theta) psi2,
  /// psi1 = -F(y1), psi2 = gamma C^{-1} psi1.
  StageBlock sweep(const StageBlock& y1) const;

  /// Throws NonConvergence when the caps are hit.
  BlendedResult solve() const;
  BlendedResult solve(StageBlock start) const;

 private:
  StageBlock blended_rhs(const StageBlock& psi1) const;
  bool converged(const StageBlock& y1, double residual_norm) const;
  BlendedResult solve_nonlinear(StageBlock y1) const;
  BlendedResult solve_linearized(StageBlock y1) const;

  const StagePartition* part_;
  VectorField field_;
  Vector y0_;
  double h_;
  BlendedConfig cfg_;
  double gamma_;
  Matrix c_inv_;
  Matrix j0_;
  std::optional<LuFactorization<double>> phi_;
};

/// F(y1) for a Hamiltonian problem.
StageBlock residual_F(const StagePartition& part, const HamiltonianSystem& system, std::span<const double> y0, double h,
                      const StageBlock& y1);

BlendedResult blended_solve(const StagePartition& part, const HamiltonianSystem& system, std::span<const double> y0,
                            double h, const BlendedConfig& cfg = {});

// Linear analysis of convergence --------------------------------------------

/// |mu_min| = min |mu| over the spectrum; InvalidSpectrum on an empty input or
/// a zero eigenvalue.
double gamma_opt(const std::vector<Complex>& spectrum);

/// max over mu of |mu - gamma|^2 / (2 gamma |mu|), the largest spectral radius
/// of the iteration matrix along the imaginary axis.
double rho_star(const std::vector<Complex>& spectrum, double gamma);

/// The matrix C^{-1} (C - gamma I)^2, so that Z(q) = q/(1-gamma q)^2 times it.
Matrix iteration_core(const Matrix& c, double gamma);

/// Z(q) = q / (1 - gamma q)^2 * C^{-1} (C - gamma I)^2. PoleError at
/// q = 1/gamma; InvalidArgument for singular C.
ComplexMatrix iteration_matrix_Z(const Matrix& c, double gamma, Complex q);

/// rho(Z(q)).
double amplification_factor(const Matrix& c, double gamma, Complex q);

struct AmplificationSample {
  double y = 0.0;  // q = i y
  double rho = 0.0;
};

struct LinearAnalysis {
  std::vector<Complex> spectrum_C;
  double gamma = 0.0;
  double rho_star = 0.0;
  std::vector<AmplificationSample> q_grid;

  /// Largest sampled rho.
  double max_sampled() const;
};

/// The imaginary-axis grid: `grid_size` log-spaced points over [1e-3, 1e3]
/// plus points clustered around y = 1/gamma, sorted ascending.
std::vector<double> amplification_grid(double gamma, int grid_size);

/// Samples rho(Z(iy)) over amplification_grid(); grid_size >= 16.
LinearAnalysis analyze_linear(const Matrix& c, double gamma, int grid_size = 200);

/// max over the grid of rho(Z(iy)).
double max_amplification(const Matrix& c, double gamma, int grid_size = 200);

}  // namespace hbvm

#endif  // HBVM_BLENDED_HPP
