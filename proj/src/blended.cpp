#include "hbvm/blended.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbvm/errors.hpp"

namespace hbvm {

namespace {

template <typename Rhs>
StageBlock reduced_residual(const StagePartition& part, const Rhs& f, std::span<const double> y0, double h,
                            const StageBlock& y1) {
  const StageBlock y2 = silent_from_fundamental(part, y0, y1);
  const std::size_t dim = y0.size();
  StageBlock f1(y1.rows(), dim), f2(y2.rows(), dim);
  for (std::size_t i = 0; i < y1.rows(); ++i) {
    const Vector fi = f(y1.row(i));
    std::copy(fi.begin(), fi.end(), f1.row(i).begin());
  }
  for (std::size_t i = 0; i < y2.rows(); ++i) {
    const Vector fi = f(y2.row(i));
    std::copy(fi.begin(), fi.end(), f2.row(i).begin());
  }
  StageBlock g = part.B1 * f1;
  if (y2.rows() > 0) g += part.B2 * f2;

  StageBlock res = y1;
  for (std::size_t i = 0; i < res.rows(); ++i)
    for (std::size_t c = 0; c < dim; ++c) res(i, c) -= y0[c] + h * g(i, c);
  return res;
}

}  // namespace

void BlendedConfig::validate() const {
  if (gamma && !(*gamma > 0.0 && std::isfinite(*gamma))) throw InvalidArgument("BlendedConfig: gamma must be positive");
  if (max_outer < 1 || max_inner < 1) throw InvalidArgument("BlendedConfig: iteration caps must be >= 1");
  if (!(rtol >= 0.0) || !(atol >= 0.0)) throw InvalidArgument("BlendedConfig: tolerances must be nonnegative");
  if (rtol == 0.0 && atol == 0.0) throw InvalidArgument("BlendedConfig: rtol and atol cannot both be zero");
}

BlendedSolver::BlendedSolver(const StagePartition& part, VectorField field, std::span<const double> y0, double h,
                             const BlendedConfig& cfg)
    : part_(&part), field_(std::move(field)), y0_(y0.begin(), y0.end()), h_(h), cfg_(cfg) {
  cfg_.validate();
  if (y0_.size() != field_.dim) throw InvalidArgument("BlendedSolver: initial state has wrong dimension");
  if (!std::isfinite(h_)) throw InvalidArgument("BlendedSolver: step size must be finite");

  gamma_ = cfg_.gamma ? *cfg_.gamma : gamma_opt(eigenvalues(part.C));
  const LuFactorization<double> c_lu(part.C);
  if (c_lu.singular()) throw InvalidArgument("BlendedSolver: reduced matrix C is singular");
  c_inv_ = c_lu.inverse();

  j0_ = field_.jacobian(y0_);
  Matrix phi = Matrix::identity(field_.dim);
  for (std::size_t i = 0; i < field_.dim; ++i)
    for (std::size_t j = 0; j < field_.dim; ++j) phi(i, j) -= h_ * gamma_ * j0_(i, j);
  phi_.emplace(std::move(phi));
  if (phi_->singular()) throw StepRejected("blended solver: I - h*gamma*J0 is singular");
}

StageBlock BlendedSolver::initial_guess() const {
  StageBlock y1(part_->s(), y0_.size());
  for (std::size_t i = 0; i < y1.rows(); ++i)
    for (std::size_t c = 0; c < y1.cols(); ++c) y1(i, c) = y0_[c];
  return y1;
}

StageBlock BlendedSolver::residual(const StageBlock& y1) const {
  return reduced_residual(*part_, field_.f, y0_, h_, y1);
}

StageBlock BlendedSolver::apply_theta(const StageBlock& block) const {
  StageBlock out(block.rows(), block.cols());
  for (std::size_t i = 0; i < block.rows(); ++i) {
    const Vector x = phi_->solve(block.row(i));
    std::copy(x.begin(), x.end(), out.row(i).begin());
  }
  return out;
}

StageBlock BlendedSolver::apply_M(const StageBlock& delta) const {
  const Matrix j0t = j0_.transposed();
  const StageBlock delta_j = delta * j0t;
  // W1 = (I - h C (x) J0) delta, W2 = gamma (C^{-1} (x) I - h I (x) J0) delta.
  StageBlock w1 = delta - h_ * (part_->C * delta_j);
  StageBlock w2 = gamma_ * (c_inv_ * delta - h_ * delta_j);
  return w2 + apply_theta(w1 - w2);
}

StageBlock BlendedSolver::blended_rhs(const StageBlock& psi1) const {
  const StageBlock psi2 = gamma_ * (c_inv_ * psi1);
  return psi2 + apply_theta(psi1 - psi2);
}

StageBlock BlendedSolver::sweep(const StageBlock& y1) const {
  return y1 + apply_theta(blended_rhs(-1.0 * residual(y1)));
}

bool BlendedSolver::converged(const StageBlock& y1, double residual_norm) const {
  return residual_norm <= cfg_.rtol * max_abs(y1) + cfg_.atol;
}

BlendedResult BlendedSolver::solve() const { return solve(initial_guess()); }

BlendedResult BlendedSolver::solve(StageBlock start) const {
  if (start.rows() != part_->s() || start.cols() != y0_.size())
    throw InvalidArgument("BlendedSolver: starting block must be s x dim");
  return cfg_.mode == BlendedMode::Nonlinear ? solve_nonlinear(std::move(start)) : solve_linearized(std::move(start));
}

BlendedResult BlendedSolver::solve_nonlinear(StageBlock y1) const {
  BlendedResult result;
  result.stats.gamma = gamma_;
  for (;;) {
    const StageBlock res = residual(y1);
    ++result.stats.residual_evaluations;
    const double norm = max_abs(res);
    result.stats.residual_norm = norm;
    if (!std::isfinite(norm))
      throw NonConvergence("blended iteration: non-finite residual", norm, result.stats.sweeps);
    if (converged(y1, norm)) break;
    if (result.stats.sweeps >= cfg_.max_inner)
      throw NonConvergence("blended iteration: no convergence after " + std::to_string(result.stats.sweeps) + " sweeps",
                           norm, result.stats.sweeps);
    y1 += apply_theta(blended_rhs(-1.0 * res));
    ++result.stats.sweeps;
    ++result.stats.outer_iterations;
  }
  result.y1 = std::move(y1);
  return result;
}

BlendedResult BlendedSolver::solve_linearized(StageBlock y1) const {
  BlendedResult result;
  result.stats.gamma = gamma_;
  for (;;) {
    const StageBlock res = residual(y1);
    ++result.stats.residual_evaluations;
    const double norm = max_abs(res);
    result.stats.residual_norm = norm;
    if (!std::isfinite(norm))
      throw NonConvergence("simplified Newton: non-finite residual", norm, result.stats.outer_iterations);
    if (converged(y1, norm)) break;
    if (result.stats.outer_iterations >= cfg_.max_outer)
      throw NonConvergence(
          "simplified Newton: no convergence after " + std::to_string(result.stats.outer_iterations) + " iterations",
          norm, result.stats.outer_iterations);

    const StageBlock psi = blended_rhs(-1.0 * res);
    StageBlock delta(y1.rows(), y1.cols());
    for (int inner = 0; inner < cfg_.max_inner; ++inner) {
      const StageBlock step = apply_theta(apply_M(delta) - psi);
      delta -= step;
      ++result.stats.sweeps;
      if (max_abs(step) <= cfg_.rtol * max_abs(y1) + cfg_.atol) break;
    }
    y1 += delta;
    ++result.stats.outer_iterations;
  }
  result.y1 = std::move(y1);
  return result;
}

StageBlock residual_F(const StagePartition& part, const HamiltonianSystem& system, std::span<const double> y0, double h,
                      const StageBlock& y1) {
  if (y0.size() != system.dim() || y1.rows() != part.s() || y1.cols() != system.dim())
    throw InvalidArgument("residual_F: dimensions are inconsistent");
  return reduced_residual(part, [&system](std::span<const double> y) { return system.f(y); }, y0, h, y1);
}

BlendedResult blended_solve(const StagePartition& part, const HamiltonianSystem& system, std::span<const double> y0,
                            double h, const BlendedConfig& cfg) {
  return BlendedSolver(part, system.vector_field(), y0, h, cfg).solve();
}

double gamma_opt(const std::vector<Complex>& spectrum) {
  if (spectrum.empty()) throw InvalidSpectrum("gamma_opt: empty spectrum");
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& mu : spectrum) {
    if (mu == Complex(0.0, 0.0)) throw InvalidSpectrum("gamma_opt: spectrum contains a zero eigenvalue");
    best = std::min(best, std::abs(mu));
  }
  return best;
}

double rho_star(const std::vector<Complex>& spectrum, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("rho_star: gamma must be positive");
  double best = 0.0;
  for (const Complex& mu : spectrum) {
    const double mod = std::abs(mu);
    if (mod == 0.0) throw InvalidSpectrum("rho_star: spectrum contains a zero eigenvalue");
    best = std::max(best, std::norm(mu - gamma) / (2.0 * gamma * mod));
  }
  return best;
}

Matrix iteration_core(const Matrix& c, double gamma) {
  const LuFactorization<double> lu(c);
  if (lu.singular()) throw InvalidArgument("iteration matrix: C is singular");
  Matrix shifted = c - gamma * Matrix::identity(c.rows());
  return lu.solve(shifted * shifted);
}

namespace {

Complex z_scale(double gamma, Complex q) {
  const Complex denom = 1.0 - gamma * q;
  if (std::abs(denom) == 0.0) throw PoleError("iteration matrix: q = 1/gamma is a pole");
  return q / (denom * denom);
}

}  // namespace

ComplexMatrix iteration_matrix_Z(const Matrix& c, double gamma, Complex q) {
  const Complex scale = z_scale(gamma, q);
  const Matrix core = iteration_core(c, gamma);
  ComplexMatrix z(core.rows(), core.cols());
  for (std::size_t i = 0; i < core.rows(); ++i)
    for (std::size_t j = 0; j < core.cols(); ++j) z(i, j) = scale * core(i, j);
  return z;
}

double amplification_factor(const Matrix& c, double gamma, Complex q) {
  return std::abs(z_scale(gamma, q)) * spectral_radius(iteration_core(c, gamma));
}

double LinearAnalysis::max_sampled() const {
  double best = 0.0;
  for (const auto& sample : q_grid) best = std::max(best, sample.rho);
  return best;
}

std::vector<double> amplification_grid(double gamma, int grid_size) {
  if (grid_size < 16) throw InvalidArgument("amplification grid needs at least 16 points");
  if (!(gamma > 0.0)) throw InvalidArgument("amplification grid: gamma must be positive");
  std::vector<double> ys;
  for (int i = 0; i < grid_size; ++i) ys.push_back(std::pow(10.0, -3.0 + 6.0 * i / (grid_size - 1)));
  // rho(Z(iy)) peaks where |q| / |1 - gamma q|^2 does, at y = 1/gamma.
  const double peak = 1.0 / gamma;
  for (int i = -10; i <= 10; ++i) ys.push_back(peak * std::pow(10.0, 0.002 * i));
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

LinearAnalysis analyze_linear(const Matrix& c, double gamma, int grid_size) {
  LinearAnalysis analysis;
  analysis.spectrum_C = eigenvalues(c);
  analysis.gamma = gamma;
  analysis.rho_star = rho_star(analysis.spectrum_C, gamma);
  const double core_radius = spectral_radius(iteration_core(c, gamma));
  for (double y : amplification_grid(gamma, grid_size))
    analysis.q_grid.push_back({y, std::abs(z_scale(gamma, Complex(0.0, y))) * core_radius});
  return analysis;
}

double max_amplification(const Matrix& c, double gamma, int grid_size) {
  return analyze_linear(c, gamma, grid_size).max_sampled();
}

}  // namespace hbvm
