#include "hbvm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbvm/errors.hpp"

namespace hbvm {

HbvmMethod make_method(int k, int s, BlendedConfig cfg, Selection selection) {
  cfg.validate();
  HbvmMethod method{make_partition(k, s, selection), cfg};
  if (!method.config.gamma) method.config.gamma = gamma_opt(eigenvalues(method.partition.C));
  return method;
}

StepResult advance_step(const StagePartition& part, const HamiltonianSystem& system, std::span<const double> y0,
                        double h, const BlendedConfig& cfg) {
  const BlendedResult solved = BlendedSolver(part, system.vector_field(), y0, h, cfg).solve();
  const StageBlock stages = assemble_stages(part, solved.y1, silent_from_fundamental(part, y0, solved.y1));

  StepResult result{Vector(y0.begin(), y0.end()), solved.stats};
  const auto& omega = part.tableau.omega;
  for (std::size_t l = 0; l < stages.rows(); ++l) {
    const Vector fl = system.f(stages.row(l));
    for (std::size_t c = 0; c < fl.size(); ++c) result.state[c] += h * omega[l] * fl[c];
  }
  return result;
}

double IntegrationResult::max_energy_error() const {
  double worst = 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()));
  return worst;
}

double IntegrationResult::max_relative_energy_error() const {
  if (energy.empty()) return 0.0;
  const double scale = std::abs(energy.front());
  return scale == 0.0 ? max_energy_error() : max_energy_error() / scale;
}

IntegrationResult integrate_steps(const HbvmMethod& method, const HamiltonianSystem& system, const Vector& y0, double h,
                                  std::size_t n_steps) {
  if (y0.size() != system.dim()) throw InvalidArgument("integrate: initial state has wrong dimension");
  if (!(std::isfinite(h) && h != 0.0)) throw InvalidArgument("integrate: step size must be finite and nonzero");

  IntegrationResult result;
  result.times.push_back(0.0);
  result.states.push_back(y0);
  result.energy.push_back(system.hamiltonian(y0));
  for (std::size_t n = 0; n < n_steps; ++n) {
    try {
      StepResult step = advance_step(method.partition, system, result.states.back(), h, method.config);
      result.times.push_back(double(n + 1) * h);
      result.energy.push_back(system.hamiltonian(step.state));
      result.states.push_back(std::move(step.state));
      result.sweeps.push_back(step.stats.sweeps);
    } catch (const Error& e) {
      result.failures.push_back({n, result.times.back(), e.what()});
      break;
    }
  }
  return result;
}

IntegrationResult integrate(const HamiltonianSystem& system, const Vector& y0, double t_end, double h, int k, int s,
                            const BlendedConfig& cfg) {
  if (!(h > 0.0) || !(t_end > 0.0)) throw InvalidArgument("integrate: need h > 0 and t_end > 0");
  const auto n_steps = static_cast<std::size_t>(std::floor(t_end / h * (1.0 + 1e-12)));
  return integrate_steps(make_method(k, s, cfg), system, y0, h, n_steps);
}

namespace {

double max_difference(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::size_t steps_for(double t_end, double h) {
  const double n = std::round(t_end / h);
  if (n < 1.0 || std::abs(n * h - t_end) > 1e-9 * t_end)
    throw InvalidArgument("observed_order: t_end must be an integer multiple of every step size");
  return static_cast<std::size_t>(n);
}

Vector final_state(const HbvmMethod& method, const HamiltonianSystem& system, const Vector& y0, double h,
                   std::size_t n) {
  IntegrationResult run = integrate_steps(method, system, y0, h, n);
  if (!run.complete()) throw NumericError("observed_order: integration failed: " + run.failures.front().reason);
  return run.states.back();
}

}  // namespace

OrderStudy observed_order(const HamiltonianSystem& system, const Vector& y0, double t_end, int k, int s, double h0,
                          int levels, const BlendedConfig& cfg, const ExactSolution& exact) {
  if (levels < 4) throw InvalidArgument("observed_order: need at least 4 step-size levels");
  if (!(h0 > 0.0) || !(t_end > 0.0)) throw InvalidArgument("observed_order: need h0 > 0 and t_end > 0");
  const HbvmMethod method = make_method(k, s, cfg);

  OrderStudy study;
  for (int level = 0; level < levels; ++level) study.step_sizes.push_back(h0 / std::pow(2.0, level));

  Vector reference;
  if (exact) {
    reference = exact(t_end);
  } else {
    const double h_ref = study.step_sizes.back() / 64.0;
    reference = final_state(method, system, y0, h_ref, steps_for(t_end, h_ref));
  }

  for (double h : study.step_sizes)
    study.errors.push_back(max_difference(final_state(method, system, y0, h, steps_for(t_end, h)), reference));

  if (study.errors.front() < 1e-13) {
    study.measurable = false;
    study.slope = std::numeric_limits<double>::quiet_NaN();
    return study;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = double(levels);
  for (int i = 0; i < levels; ++i) {
    const double x = std::log(study.step_sizes[std::size_t(i)]);
    const double y = std::log(study.errors[std::size_t(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  study.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return study;
}

double reversibility_check(const HamiltonianSystem& system, const Vector& y0, std::size_t n_steps, double h, int k,
                           int s, const BlendedConfig& cfg) {
  if (n_steps == 0) return 0.0;
  const HbvmMethod method = make_method(k, s, cfg);
  const IntegrationResult forward = integrate_steps(method, system, y0, h, n_steps);
  if (!forward.complete()) throw NumericError("reversibility_check: forward run failed: " + forward.failures.front().reason);
  const IntegrationResult backward = integrate_steps(method, system, forward.states.back(), -h, n_steps);
  if (!backward.complete())
    throw NumericError("reversibility_check: backward run failed: " + backward.failures.front().reason);
  return max_difference(backward.states.back(), y0);
}

}  // namespace hbvm
